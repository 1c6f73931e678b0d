"""Gadget templates, their fixture files, and the rigidity harness.

Fixture format: a `trg` graph block holding the wiring in its reference
coloring, followed by sections

    attach <k>      then one line of k attachment vertices
    dangling <d>    then d lines `anchor color` (color 0 = unconstrained)
    free <f>        then f lines `u v`: boundary edges left open in enumeration
    pinned <p>      then p lines `u v`: edges fixed to their reference color
    rotation        then one line: image of every vertex
    require <kind>

Internal (constrained) vertices are the non-attachment vertices.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations

from ..graph import ColoredGraph, GraphError, loads as loads_graph
from .solver import (BLUE, RED, BudgetExceeded, FlipMode, RcMode, Skeleton, _key,
                     enumerate_colorings)

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")
REQUIRE_KINDS = ("unique", "alternating", "unique-internal", "rotation-closed")


class GadgetError(ValueError):
    pass


@dataclass
class GadgetTemplate:
    name: str
    mode: str  # "rc" or "flip"
    n: int
    edges: dict  # (u, v) -> reference color
    attach: tuple = ()
    dangling: tuple = ()  # (anchor, color or 0)
    free: tuple = ()
    pinned: tuple = ()
    rotation: tuple = None
    require: str = "unique"

    @property
    def internal(self):
        a = set(self.attach)
        return tuple(v for v in range(self.n) if v not in a)

    def mode_obj(self):
        return RcMode() if self.mode == "rc" else FlipMode()

    def skeleton(self):
        """Wiring plus one far-end vertex per dangling half-edge (numbered from n)."""
        es = list(self.edges)
        es += [(a, self.n + k) for k, (a, _) in enumerate(self.dangling)]
        return Skeleton(self.n + len(self.dangling), es)

    def dangling_edges(self):
        return [(a, self.n + k) for k, (a, _) in enumerate(self.dangling)]

    def boundary(self):
        """Colors fixed before enumeration: dangling edges with a color, and pinned edges."""
        fixed = {e: c for e, (_, c) in zip(self.dangling_edges(), self.dangling) if c}
        fixed.update({_key(*e): self.edges[_key(*e)] for e in self.pinned})
        return fixed

    def reference(self):
        out = dict(self.edges)
        for e, (_, c) in zip(self.dangling_edges(), self.dangling):
            out[e] = c or BLUE
        return out

    def degree(self, v):
        return sum(1 for e in self.edges if v in e) + sum(1 for a, _ in self.dangling if a == v)


# ---- fixture I/O ----

def dumps_template(t: GadgetTemplate) -> str:
    g = ColoredGraph(2, t.n, [(u, v, c) for (u, v), c in t.edges.items()])
    lines = ["# gadget %s (%s mode)" % (t.name, t.mode), "trg 2 %d %d" % (t.n, g.m)]
    lines += ["%d %d %d" % e for e in g.sorted_edges()]
    lines.append("attach %d" % len(t.attach))
    if t.attach:
        lines.append(" ".join(map(str, t.attach)))
    lines.append("dangling %d" % len(t.dangling))
    lines += ["%d %d" % d for d in t.dangling]
    lines.append("free %d" % len(t.free))
    lines += ["%d %d" % e for e in t.free]
    lines.append("pinned %d" % len(t.pinned))
    lines += ["%d %d" % e for e in t.pinned]
    if t.rotation is not None:
        lines.append("rotation")
        lines.append(" ".join(map(str, t.rotation)))
    lines.append("require %s" % t.require)
    return "\n".join(lines) + "\n"


def loads_template(text: str, name="gadget", mode=None) -> GadgetTemplate:
    raw = text.splitlines()
    for line in raw:
        if line.startswith("# gadget "):
            parts = line.split()
            name = parts[2]
            mode = mode or parts[3].strip("(")
    lines = [ln.split("#", 1)[0].strip() for ln in raw]
    lines = [ln for ln in lines if ln]
    head = lines[0].split()
    if head[0] != "trg" or len(head) != 4:
        raise GadgetError("fixture must start with a trg header")
    m = int(head[3])
    g = loads_graph("\n".join(lines[:m + 1]))
    rest = lines[m + 1:]
    out = GadgetTemplate(name, mode or "flip", g.n, {(u, v): c for u, v, c in g.edges})
    k = 0

    def take(count):
        nonlocal k
        chunk = rest[k:k + count]
        if len(chunk) != count:
            raise GadgetError("truncated section")
        k += count
        return chunk

    while k < len(rest):
        parts = rest[k].split()
        k += 1
        key = parts[0]
        if key == "attach":
            cnt = int(parts[1])
            out.attach = tuple(int(x) for x in take(1)[0].split()) if cnt else ()
            if len(out.attach) != cnt:
                raise GadgetError("attach count mismatch")
        elif key == "dangling":
            out.dangling = tuple(tuple(int(x) for x in ln.split()) for ln in take(int(parts[1])))
        elif key == "free":
            out.free = tuple(_key(*map(int, ln.split())) for ln in take(int(parts[1])))
        elif key == "pinned":
            out.pinned = tuple(_key(*map(int, ln.split())) for ln in take(int(parts[1])))
        elif key == "rotation":
            out.rotation = tuple(int(x) for x in take(1)[0].split())
        elif key == "require":
            if parts[1] not in REQUIRE_KINDS:
                raise GadgetError("unknown requirement %r" % parts[1])
            out.require = parts[1]
        else:
            raise GadgetError("unknown section %r" % key)
    for e in out.free + out.pinned:
        if e not in out.edges:
            raise GadgetError("section edge %s is not in the wiring" % (e,))
    return out


def fixture_path(name):
    return os.path.join(FIXTURE_DIR, name + ".trg")


def loadTemplate(name_or_path) -> GadgetTemplate:
    path = name_or_path if os.path.exists(name_or_path) else fixture_path(name_or_path)
    with open(path) as fh:
        return loads_template(fh.read())


def saveTemplate(t: GadgetTemplate, path=None):
    with open(path or fixture_path(t.name), "w") as fh:
        fh.write(dumps_template(t))


# ---- builders ----

class _Wiring:
    def __init__(self):
        self.n = 0
        self.edges = {}
        self.dangling = []

    def vertex(self):
        self.n += 1
        return self.n - 1

    def edge(self, u, v, c):
        e = _key(u, v)
        if e in self.edges or u == v:
            raise GadgetError("bad edge %s" % (e,))
        self.edges[e] = c

    def dangle(self, a, c, k=1):
        self.dangling += [(a, c)] * k


def octahedron(w: _Wiring, A, blue_dangling=7):
    """Red octahedron through A; the five other vertices carry blue danglers."""
    vs = [A] + [w.vertex() for _ in range(5)]
    opposite = {0: 1, 1: 0, 2: 3, 3: 2, 4: 5, 5: 4}
    for i, j in combinations(range(6), 2):
        if opposite[i] != j:
            w.edge(vs[i], vs[j], RED)
    for v in vs[1:]:
        w.dangle(v, BLUE, blue_dangling)
    return vs


def dangler_generator() -> GadgetTemplate:
    w = _Wiring()
    q = [w.vertex() for _ in range(4)]
    for a, b in combinations(q, 2):
        w.edge(a, b, RED)
    for v in q:
        w.dangle(v, 0, 4)
    return GadgetTemplate("dangler_generator", "flip", w.n, w.edges, (), tuple(w.dangling))


def flip_aux() -> GadgetTemplate:
    w = _Wiring()
    A = w.vertex()
    octahedron(w, A)
    return GadgetTemplate("flip_aux", "flip", w.n, w.edges, (A,), tuple(w.dangling))


def variable_cycle_edges(u):
    return [(u[i], u[(i + 1) % 8]) for i in range(8)]


def flip_variable() -> GadgetTemplate:
    """8-cycle of A-vertices, reference state TRUE (even cycle edges blue).

    Attachment c_i stands for the clause vertex joined to both ends of cycle edge i.
    """
    w = _Wiring()
    u = [w.vertex() for _ in range(8)]
    for i, (a, b) in enumerate(variable_cycle_edges(u)):
        w.edge(a, b, BLUE if i % 2 == 0 else RED)
    for v in u:
        octahedron(w, v)
        w.dangle(v, BLUE, 3)
    att = []
    pinned = []
    for a, b in variable_cycle_edges(u):
        c = w.vertex()
        att.append(c)
        w.edge(c, a, BLUE)
        w.edge(c, b, BLUE)
        pinned += [_key(c, a), _key(c, b)]
    return GadgetTemplate("flip_variable", "flip", w.n, w.edges, tuple(att), tuple(w.dangling),
                          free=tuple(_key(*e) for e in variable_cycle_edges(u)),
                          pinned=tuple(pinned), require="alternating")


def flip_clause() -> GadgetTemplate:
    """Vertices L, R with red octahedra; per variable three consecutive cycle vertices.

    L sees the positive cycle edge of each variable, R the negative one.  The
    reference colors the positive edges red and the negative ones blue.
    """
    w = _Wiring()
    L, R = w.vertex(), w.vertex()
    octahedron(w, L)
    octahedron(w, R)
    att, free = [], []
    for _ in range(3):
        a, b, c = w.vertex(), w.vertex(), w.vertex()
        att += [a, b, c]
        w.edge(a, b, RED)
        w.edge(b, c, BLUE)
        free += [_key(a, b), _key(b, c)]
        w.edge(L, a, BLUE)
        w.edge(L, b, BLUE)
        w.edge(R, b, BLUE)
        w.edge(R, c, BLUE)
    return GadgetTemplate("flip_clause", "flip", w.n, w.edges, tuple(att), tuple(w.dangling),
                          free=tuple(free), require="unique-internal")


RC_M = 12
RC_ORBITS = (("A", "A", 1), ("A", "A", 3), ("A", "B", 3), ("B", "B", 4), ("B", "B", 5))


def rc_variable(m=RC_M) -> GadgetTemplate:
    """Circulant rc variable gadget: A(k) = 2k, B(k) = 2k + 1, attachment p_k = 2m + k.

    Base edges A(k)B(k); p_k is joined to both ends of base k; the remaining
    edges are the orbits in RC_ORBITS.  Every internal vertex has degree 7 and
    3 neighborhood edges.  The reference coloring is its only valid coloring.
    """
    A = lambda k: 2 * (k % m)
    B = lambda k: 2 * (k % m) + 1
    P = lambda k: 2 * m + k % m
    w = _Wiring()
    w.n = 3 * m
    for k in range(m):
        w.edge(A(k), B(k), BLUE)
        w.edge(P(k), A(k), RED)
        w.edge(P(k), B(k), RED)
    side = {"A": A, "B": B}
    for s1, s2, d in RC_ORBITS:
        for k in range(m):
            e = _key(side[s1](k), side[s2](k + d))
            if e not in w.edges:
                w.edge(e[0], e[1], BLUE)
    rot = tuple([A(k + 1) if v % 2 == 0 else B(k + 1) for k in range(m) for v in (0, 1)]
                + [P(k + 1) for k in range(m)])
    return GadgetTemplate("rc_variable", "rc", w.n, w.edges, tuple(P(k) for k in range(m)),
                          (), rotation=rot, require="rotation-closed")


def rc_bases(t: GadgetTemplate):
    m = len(t.attach)
    return [(2 * k, 2 * k + 1) for k in range(m)]


BUILDERS = {"dangler_generator": dangler_generator, "flip_aux": flip_aux,
            "flip_variable": flip_variable, "flip_clause": flip_clause, "rc_variable": rc_variable}


def write_fixtures():
    for name, build in BUILDERS.items():
        saveTemplate(build())


# ---- rigidity harness ----

def enumerateGadgetColorings(tmpl: GadgetTemplate, mode=None, budget=1 << 26):
    """Every coloring valid at the internal vertices, with boundary colors fixed."""
    mode = mode or tmpl.mode_obj()
    try:
        return enumerate_colorings(tmpl.skeleton(), mode, tmpl.internal, tmpl.boundary(), budget)
    except BudgetExceeded:
        raise GadgetError("enumeration budget %d exceeded" % budget)


def _canon(col):
    return tuple(sorted(col.items()))


def rotate(tmpl, col):
    p = tmpl.rotation
    return {_key(p[u], p[v]): c for (u, v), c in col.items()}


@dataclass
class RigidityReport:
    name: str
    require: str
    count: int
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_json(self):
        return {"name": self.name, "require": self.require, "count": self.count, "ok": self.ok,
                "detail": self.detail}


def checkRigidity(tmpl: GadgetTemplate, cols=None) -> RigidityReport:
    """Compare the enumerated colorings with the template's requirement."""
    cols = enumerateGadgetColorings(tmpl) if cols is None else cols
    ref = {e: c for e, c in tmpl.reference().items()}
    got = {_canon(c) for c in cols}
    detail = {}
    if tmpl.require == "unique":
        ok = got == {_canon(ref)}
    elif tmpl.require == "alternating":
        swap = dict(ref)
        for e in tmpl.free:
            swap[e] = RED + BLUE - ref[e]
        ok = got == {_canon(ref), _canon(swap)}
    elif tmpl.require == "unique-internal":
        free = set(tmpl.free)
        proj = {tuple((e, c) for e, c in _canon(col) if e not in free) for col in cols}
        want = tuple((e, c) for e, c in _canon(ref) if e not in free)
        patterns = sorted({tuple(col[e] for e in tmpl.free) for col in cols})
        detail = {"internalColorings": len(proj), "boundaryPatterns": len(patterns)}
        ok = proj == {want}
    elif tmpl.require == "rotation-closed":
        closed = all(_canon(rotate(tmpl, c)) in got for c in cols)
        classes = set()
        for c in cols:
            orbit, cur = [], c
            for _ in range(len(tmpl.attach)):
                orbit.append(_canon(cur))
                cur = rotate(tmpl, cur)
            classes.add(min(orbit))
        bases = rc_bases(tmpl)
        has_true = any(all(c[b] == RED for b in bases) for c in cols)
        has_false = any(all(c[b] == BLUE for b in bases) for c in cols)
        detail = {"rotationClosed": closed, "colorings": len(cols), "rotationClasses": len(classes),
                  "trueState": has_true, "falseState": has_false}
        # the variable gadget must offer a TRUE state and at most four classes
        ok = closed and has_true and has_false and 0 < len(classes) <= 4
    else:
        raise GadgetError("unknown requirement %r" % tmpl.require)
    return RigidityReport(tmpl.name, tmpl.require, len(cols), ok, detail)


# ---- search ----

@dataclass(frozen=True)
class GadgetSpec:
    mode: str  # "rc" or "flip"
    internal: int
    degree: int  # total degree of each internal vertex
    dangling: int = 0  # per internal vertex
    attachments: int = 0
    attachDegree: int = 0
    colorings: int = 1  # required number of valid colorings (rotation classes if byRotation)
    danglingColor: int = 0
    byRotation: bool = False


def search_obstruction(spec: GadgetSpec):
    """Reason no wiring can exist, or None."""
    wire = spec.internal * (spec.degree - spec.dangling) - spec.attachments * spec.attachDegree
    if wire < 0 or wire % 2:
        return "handshake: internal wiring degree sum %d is not a non-negative even number" % wire
    if spec.degree - spec.dangling > spec.internal - 1 + spec.attachments:
        return "degree exceeds available partners"
    if spec.attachDegree > spec.internal:
        return "attachment degree exceeds internal vertex count"
    if spec.mode == "rc" and spec.attachDegree == 2:
        # each internal vertex lies in 3 triangles and each merged attachment in exactly one
        if spec.attachments % 3:
            return ("triangle count: internal-only triangles number %d - 2*%d/3, not an integer"
                    % (spec.internal, spec.attachments))
        # a red apex at every internal vertex needs internal triangles the attachments consume
        return ("apex count: at most %d of %d internal vertices can see their red edge in an "
                "internal triangle once attachment bases are red" %
                (spec.internal - 2 * spec.attachments // 3, spec.internal))
    return None


def _wirings(spec: GadgetSpec, budget):
    n, a = spec.internal, spec.attachments
    need = [spec.degree - spec.dangling] * n + [spec.attachDegree] * a
    pairs = [(u, v) for u, v in combinations(range(n + a), 2) if u < n]
    chosen = []
    nodes = [0]

    def rec(k):
        nodes[0] += 1
        if nodes[0] > budget:
            return
        if all(x == 0 for x in need):
            yield list(chosen)
            return
        if k == len(pairs):
            return
        u, v = pairs[k]
        # vertex u must be completed before moving past its last pair
        if need[u] > 0 and need[v] > 0:
            need[u] -= 1
            need[v] -= 1
            chosen.append((u, v))
            yield from rec(k + 1)
            chosen.pop()
            need[u] += 1
            need[v] += 1
        nxt = k + 1
        if nxt < len(pairs) and pairs[nxt][0] != u and need[u] > 0:
            return
        if nxt == len(pairs) and any(need):
            return
        yield from rec(nxt)

    yield from rec(0)


def _invariant(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    sig = sorted((len(adj[v]), sum(1 for x in adj[v] for y in adj[v] if x < y and y in adj[x]))
                 for v in range(n))
    return tuple(sig)


def searchGadget(spec: GadgetSpec, budget=200000):
    """First wiring whose enumerated colorings match the spec, or None.

    Wirings sharing a degree/triangle signature with an already rejected one
    are skipped, so the search is complete only up to that invariant.
    """
    if search_obstruction(spec) is not None:
        return None
    n, a = spec.internal, spec.attachments
    seen = set()
    mode = "rc" if spec.mode == "rc" else "flip"
    for edges in _wirings(spec, budget):
        inv = _invariant(n + a, edges)
        if inv in seen:
            continue
        seen.add(inv)
        dang = tuple((v, spec.danglingColor) for v in range(n) for _ in range(spec.dangling))
        tmpl = GadgetTemplate("searched", mode, n + a, {e: BLUE for e in edges},
                              tuple(range(n, n + a)), dang)
        cols = enumerateGadgetColorings(tmpl)
        if spec.byRotation:
            continue  # rotation-class counting needs a stated rotation
        if len(cols) == spec.colorings:
            if cols:
                tmpl.edges = {e: cols[0][e] for e in tmpl.edges}
            return tmpl
    return None
