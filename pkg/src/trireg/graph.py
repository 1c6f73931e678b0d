"""Edge-colored simple graphs, per-vertex triangle profiles, and Cartesian products.

Vertices are 0-based, colors 1-based.  Neighborhood edge counts pool the
neighbors of a vertex across all colors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple


class GraphError(ValueError):
    """Base class for malformed graphs and graph files."""


class MalformedHeader(GraphError):
    pass


class VertexOutOfRange(GraphError):
    pass


class ColorOutOfRange(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class VertexProfile(NamedTuple):
    deg: tuple
    nbhdEdges: tuple


@dataclass(frozen=True)
class RegularityProfile:
    r: tuple
    c: tuple
    uniform: bool = True

    def __str__(self):
        return "(r=%s, c=%s) %s" % (list(self.r), list(self.c),
                                    "uniform" if self.uniform else "non-uniform")


@dataclass(frozen=True)
class NonUniform:
    witnesses: tuple
    profiles: tuple
    uniform: bool = False

    def __str__(self):
        (a, b), (pa, pb) = self.witnesses, self.profiles
        return "non-uniform: vertex %d has %s, vertex %d has %s" % (
            a, _fmt_vp(pa), b, _fmt_vp(pb))


@dataclass(frozen=True)
class Valid:
    ok: bool = True

    def __str__(self):
        return "flip: valid"


@dataclass(frozen=True)
class Violation:
    vertex: int
    colorPair: tuple
    reason: str
    ok: bool = False

    def __str__(self):
        return "flip violation at vertex %d, colors %s: %s" % (
            self.vertex, self.colorPair, self.reason)


@dataclass(frozen=True)
class ProfileTerm:
    r: tuple
    c: tuple
    factorDescription: str = ""

    @property
    def t(self):
        return len(self.r)


def _fmt_vp(p):
    return "(deg=%s, nbhdEdges=%s)" % (list(p.deg), list(p.nbhdEdges))


@dataclass(frozen=True, eq=False)
class ColoredGraph:
    t: int
    n: int
    edges: frozenset
    _adj: tuple = field(default=None, repr=False, compare=False)
    _color: dict = field(default=None, repr=False, compare=False)

    def __init__(self, t: int, n: int, edges: Iterable):
        if t < 1:
            raise ColorOutOfRange("t must be positive, got %r" % t)
        if n < 0:
            raise VertexOutOfRange("negative vertex count")
        norm = set()
        color = {}
        adj = [[] for _ in range(n)]
        for e in edges:
            u, v, c = (int(x) for x in e)
            if u == v:
                raise SelfLoop("self-loop at vertex %d" % u)
            if u > v:
                u, v = v, u
            if u < 0 or v >= n:
                raise VertexOutOfRange("edge (%d, %d) outside 0..%d" % (u, v, n - 1))
            if not 1 <= c <= t:
                raise ColorOutOfRange("color %d outside 1..%d" % (c, t))
            if (u, v) in color:
                raise DuplicateEdge("duplicate edge (%d, %d)" % (u, v))
            color[(u, v)] = c
            norm.add((u, v, c))
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "t", int(t))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "_color", color)

    def __eq__(self, other):
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return (self.t, self.n, self.edges) == (other.t, other.n, other.edges)

    def __hash__(self):
        return hash((self.t, self.n, self.edges))

    def __repr__(self):
        return "ColoredGraph(t=%d, n=%d, m=%d)" % (self.t, self.n, len(self.edges))

    @property
    def m(self):
        return len(self.edges)

    def neighbors(self, v):
        return self._adj[v]

    def color(self, u, v):
        """Color of edge uv, or None if absent."""
        if u > v:
            u, v = v, u
        return self._color.get((u, v))

    def sorted_edges(self):
        return sorted(self.edges)

    def masks(self):
        """Bit-packed rows: (all-color neighbor masks, per-color masks indexed 1..t)."""
        nb = [0] * self.n
        per = [[0] * self.n for _ in range(self.t + 1)]
        for u, v, c in self.edges:
            nb[u] |= 1 << v
            nb[v] |= 1 << u
            per[c][u] |= 1 << v
            per[c][v] |= 1 << u
        return nb, per

    def recolor(self, coloring: dict, t: int = None):
        """Copy with edge colors replaced via a map (u, v) -> color."""
        t = self.t if t is None else t
        return ColoredGraph(t, self.n, [(u, v, coloring.get((u, v), c)) for u, v, c in self.edges])


def from_edge_list(n, pairs, t=1, color=1):
    return ColoredGraph(t, n, [(u, v, color) for u, v in pairs])


def complete_graph(k, color=1, t=None):
    t = color if t is None else t
    return ColoredGraph(t, k, [(u, v, color) for u in range(k) for v in range(u + 1, k)])


def cycle_graph(k, color=1, t=None):
    t = color if t is None else t
    return ColoredGraph(t, k, [(i, (i + 1) % k, color) for i in range(k)])


def complete_bipartite(a, b, color=1, t=None):
    t = color if t is None else t
    return ColoredGraph(t, a + b, [(u, a + w, color) for u in range(a) for w in range(b)])


def petersen_graph():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return from_edge_list(10, outer + spokes + inner)


def single_vertex(t=1):
    return ColoredGraph(t, 1, [])


def disjoint_union(g, h):
    if g.t != h.t:
        raise GraphError("color counts differ: %d vs %d" % (g.t, h.t))
    shift = g.n
    return ColoredGraph(g.t, g.n + h.n,
                        list(g.edges) + [(u + shift, v + shift, c) for u, v, c in h.edges])


BITSET_THRESHOLD = 4096


def triangleProfile(g: ColoredGraph, bitset_threshold: int = BITSET_THRESHOLD) -> dict:
    """Map vertex -> VertexProfile.

    nbhdEdges[i] counts color-i edges with both endpoints in the open
    neighborhood, which for each v equals half the sum over neighbors u of
    |N_i(u) & N(v)|.  Graphs above the threshold use hashed neighbor sets.
    """
    if g.n > bitset_threshold:
        return _profile_sparse(g)
    nb, per = g.masks()
    out = {}
    t = g.t
    for v in range(g.n):
        N = nb[v]
        deg = [0] * t
        inside = [0] * t
        for u in g._adj[v]:
            deg[g._color[(u, v) if u < v else (v, u)] - 1] += 1
            for i in range(t):
                m = per[i + 1][u] & N
                if m:
                    inside[i] += m.bit_count()
        out[v] = VertexProfile(tuple(deg), tuple(x // 2 for x in inside))
    return out


def _profile_sparse(g):
    col = g._color
    adj = g._adj
    out = {}
    for v in range(g.n):
        N = set(adj[v])
        deg = [0] * g.t
        inside = [0] * g.t
        for u in adj[v]:
            deg[col[(u, v) if u < v else (v, u)] - 1] += 1
            for w in adj[u]:
                if w > u and w in N:
                    inside[col[(u, w)] - 1] += 1
        out[v] = VertexProfile(tuple(deg), tuple(inside))
    return out


def checkTriangleRegular(g: ColoredGraph):
    """RegularityProfile if every vertex has the same profile, else NonUniform."""
    prof = triangleProfile(g)
    if g.n == 0:
        return RegularityProfile(tuple([0] * g.t), tuple([0] * g.t), True)
    first = prof[0]
    for v in range(1, g.n):
        if prof[v] != first:
            return NonUniform((0, v), (first, prof[v]))
    return RegularityProfile(first.deg, first.nbhdEdges, True)


def flipViolation(deg, nbhd, vertex=-1):
    """First flip violation for one vertex profile, or None."""
    t = len(deg)
    closed = [nbhd[i] + deg[i] for i in range(t)]
    for i in range(t):
        for j in range(i + 1, t):
            if not deg[j] > deg[i]:
                return Violation(vertex, (i + 1, j + 1),
                                 "deg_%d = %d is not > deg_%d = %d" % (j + 1, deg[j], i + 1, deg[i]))
            if not closed[i] > closed[j]:
                return Violation(vertex, (i + 1, j + 1),
                                 "closed_%d = %d is not > closed_%d = %d" % (i + 1, closed[i], j + 1, closed[j]))
    return None


def checkFlip(g: ColoredGraph, vertices=None):
    """Valid iff color degrees strictly increase and closed-neighborhood color counts strictly decrease."""
    if g.t == 1:
        return Valid()
    prof = triangleProfile(g)
    for v in (range(g.n) if vertices is None else vertices):
        bad = flipViolation(prof[v].deg, prof[v].nbhdEdges, v)
        if bad is not None:
            return bad
    return Valid()


def cartesianProduct(g: ColoredGraph, h: ColoredGraph) -> ColoredGraph:
    """Vertex (a, b) is numbered a * h.n + b."""
    if g.t != h.t:
        raise GraphError("cannot multiply graphs with t=%d and t=%d" % (g.t, h.t))
    hn = h.n
    edges = []
    for u, v, c in g.edges:
        for b in range(hn):
            edges.append((u * hn + b, v * hn + b, c))
    for u, v, c in h.edges:
        for a in range(g.n):
            edges.append((a * hn + u, a * hn + v, c))
    return ColoredGraph(g.t, g.n * hn, edges)


def productOf(graphs):
    out = graphs[0]
    for h in graphs[1:]:
        out = cartesianProduct(out, h)
    return out


def addProfiles(a: ProfileTerm, b: ProfileTerm) -> ProfileTerm:
    if len(a.r) != len(b.r):
        raise GraphError("profiles have different t")
    desc = " x ".join(d for d in (a.factorDescription, b.factorDescription) if d)
    return ProfileTerm(tuple(x + y for x, y in zip(a.r, b.r)),
                       tuple(x + y for x, y in zip(a.c, b.c)), desc)


def profileTerm(g: ColoredGraph, description=""):
    """ProfileTerm of a verified triangle-regular graph."""
    p = checkTriangleRegular(g)
    if not p.uniform:
        raise GraphError("graph is not triangle-regular: %s" % p)
    return ProfileTerm(p.r, p.c, description)


def triangles(g: ColoredGraph):
    """All triangles as sorted vertex triples."""
    out = []
    adj = [set(a) for a in g._adj]
    for u in range(g.n):
        for v in g._adj[u]:
            if v <= u:
                continue
            for w in adj[u] & adj[v]:
                if w > v:
                    out.append((u, v, w))
    return out


# ---- file format ----

def dumps(g: ColoredGraph) -> str:
    lines = ["trg %d %d %d" % (g.t, g.n, g.m)]
    lines += ["%d %d %d" % e for e in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def _content_lines(text):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def loads(text: str) -> ColoredGraph:
    lines = list(_content_lines(text))
    if not lines:
        raise MalformedHeader("empty graph file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "trg":
        raise MalformedHeader("expected 'trg <t> <n> <m>', got %r" % lines[0])
    try:
        t, n, m = (int(x) for x in head[1:])
    except ValueError:
        raise MalformedHeader("non-integer header field in %r" % lines[0])
    body = lines[1:]
    if len(body) != m:
        raise MalformedHeader("header declares %d edges, found %d" % (m, len(body)))
    edges = []
    for line in body:
        parts = line.split()
        if len(parts) != 3:
            raise MalformedHeader("bad edge line %r" % line)
        u, v, c = (int(x) for x in parts)
        if u >= v:
            if u == v:
                raise SelfLoop("self-loop at vertex %d" % u)
            raise MalformedHeader("edge line %r must have u < v" % line)
        edges.append((u, v, c))
    return ColoredGraph(t, n, edges)


def saveGraph(g: ColoredGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(g))


def loadGraph(path) -> ColoredGraph:
    with open(path) as fh:
        return loads(fh.read())
