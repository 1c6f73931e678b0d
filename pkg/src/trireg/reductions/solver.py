"""2-coloring search under per-vertex count constraints.

Every local rule used by the reductions is a cardinality bound
lo <= #red(E) <= hi on some edge set E (incident edges, neighborhood edges,
or closed-neighborhood edges of a vertex).  Search is depth-first with
propagation: a bound that is tight forces its remaining edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

RED, BLUE = 1, 2


@dataclass(frozen=True)
class RcMode:
    r: tuple = (1, 6)
    c: tuple = (1, 2)


@dataclass(frozen=True)
class FlipMode:
    pass


@dataclass
class Coloring:
    colors: dict  # (u, v) -> 1 (red) or 2 (blue)
    nodes: int = 0
    verdict: str = "Coloring"


@dataclass
class Unsat:
    nodes: int = 0
    verdict: str = "Unsat"


@dataclass
class Timeout:
    nodes: int = 0
    verdict: str = "Timeout"


class BudgetExceeded(RuntimeError):
    pass


def _key(u, v):
    return (u, v) if u < v else (v, u)


class Skeleton:
    """Uncolored simple graph given by adjacency sets."""

    def __init__(self, n, edges):
        self.n = n
        self.adj = [set() for _ in range(n)]
        self.edges = []
        for u, v in edges:
            u, v = _key(u, v)
            if v in self.adj[u]:
                continue
            self.adj[u].add(v)
            self.adj[v].add(u)
            self.edges.append((u, v))

    @classmethod
    def of(cls, g):
        return cls(g.n, [(u, v) for u, v, _ in g.edges])

    def incident(self, v):
        return [_key(v, u) for u in self.adj[v]]

    def nbhd(self, v):
        N = self.adj[v]
        return [(a, b) for a in N for b in self.adj[a] if a < b and b in N]


def local_constraints(sk: Skeleton, mode, vertices):
    """(edges, lo, hi, label) for each constrained vertex."""
    out = []
    for v in vertices:
        inc = sk.incident(v)
        nb = sk.nbhd(v)
        if isinstance(mode, RcMode):
            (r1, r2), (c1, c2) = mode.r, mode.c
            if len(inc) != r1 + r2 or len(nb) != c1 + c2:
                out.append(([], 1, 0, "shape@%d" % v))
                continue
            out.append((inc, r1, r1, "deg@%d" % v))
            out.append((nb, c1, c1, "nbhd@%d" % v))
        elif isinstance(mode, FlipMode):
            # red degree < blue degree, red closed count > blue closed count
            closed = inc + nb
            out.append((inc, 0, (len(inc) - 1) // 2, "deg@%d" % v))
            out.append((closed, len(closed) // 2 + 1, len(closed), "closed@%d" % v))
        else:
            raise TypeError("unknown mode %r" % (mode,))
    return out


class CardinalitySearch:
    def __init__(self, edges, constraints, fixed=None):
        self.edges = list(edges)
        self.index = {e: k for k, e in enumerate(self.edges)}
        self.val = [0] * len(self.edges)
        self.cons = []
        self.edge_cons = [[] for _ in self.edges]
        self.infeasible = False
        for es, lo, hi, label in constraints:
            ids = [self.index[e] for e in es]
            cid = len(self.cons)
            self.cons.append((ids, lo, hi, label))
            for e in ids:
                self.edge_cons[e].append(cid)
            if lo > hi or lo > len(ids) or hi < 0:
                self.infeasible = True
        self.red = [0] * len(self.cons)
        self.free = [len(c[0]) for c in self.cons]
        self.trail = []
        self.fixed = {self.index[_key(*e)]: c for e, c in (fixed or {}).items()}
        self.nodes = 0

    def _set(self, e, c, queue):
        self.val[e] = c
        self.trail.append(e)
        for cid in self.edge_cons[e]:
            self.free[cid] -= 1
            if c == RED:
                self.red[cid] += 1
            queue.append(cid)

    def _undo(self, mark):
        while len(self.trail) > mark:
            e = self.trail.pop()
            c = self.val[e]
            self.val[e] = 0
            for cid in self.edge_cons[e]:
                self.free[cid] += 1
                if c == RED:
                    self.red[cid] -= 1

    def _propagate(self, queue):
        while queue:
            cid = queue.pop()
            ids, lo, hi, _ = self.cons[cid]
            r, f = self.red[cid], self.free[cid]
            if r > hi or r + f < lo:
                return False
            if f == 0:
                continue
            if r == hi:
                force = BLUE
            elif r + f == lo:
                force = RED
            else:
                continue
            for e in ids:
                if self.val[e] == 0:
                    self._set(e, force, queue)
        return True

    def _assign(self, e, c):
        queue = []
        if self.val[e]:
            return self.val[e] == c
        self._set(e, c, queue)
        return self._propagate(queue)

    def _start(self):
        if self.infeasible:
            return False
        queue = list(range(len(self.cons)))
        for e, c in self.fixed.items():
            if self.val[e] == 0:
                self._set(e, c, queue)
            elif self.val[e] != c:
                return False
        return self._propagate(queue)

    def _branch_edge(self):
        # first free edge of the tightest open constraint, else any free edge
        best, bestSlack = None, None
        for cid, (ids, lo, hi, _) in enumerate(self.cons):
            f = self.free[cid]
            if f == 0:
                continue
            slack = min(hi - self.red[cid], self.red[cid] + f - lo)
            if bestSlack is None or slack < bestSlack:
                best, bestSlack = cid, slack
                if slack <= 1:
                    break
        if best is not None:
            for e in self.cons[best][0]:
                if self.val[e] == 0:
                    return e
        for e, c in enumerate(self.val):
            if c == 0:
                return e
        return None

    def solutions(self, budget=None):
        """Yield each complete coloring as a list of colors aligned with self.edges."""
        if not self._start():
            return
        stack = [(self._branch_edge(), [RED, BLUE], len(self.trail))]
        while stack:
            e, todo, mark = stack[-1]
            if e is None:
                yield list(self.val)
                stack.pop()
                continue
            self._undo(mark)
            if not todo:
                stack.pop()
                continue
            c = todo.pop(0)
            self.nodes += 1
            if budget is not None and self.nodes > budget:
                raise BudgetExceeded(self.nodes)
            if self._assign(e, c):
                stack.append((self._branch_edge(), [RED, BLUE], len(self.trail)))

    def as_dict(self, vals):
        return {self.edges[k]: c for k, c in enumerate(vals)}


def solveColoring(g, mode, budget=10 ** 7, fixed=None, vertices=None):
    """Coloring, Unsat (search exhausted) or Timeout (budget of branching nodes spent).

    g is a ColoredGraph (colors ignored) or a Skeleton.  Only `vertices`
    (default: all) carry constraints; `fixed` pins edge colors.
    """
    sk = g if isinstance(g, Skeleton) else Skeleton.of(g)
    vertices = range(sk.n) if vertices is None else vertices
    s = CardinalitySearch(sk.edges, local_constraints(sk, mode, vertices), fixed)
    try:
        for vals in s.solutions(budget):
            return Coloring(s.as_dict(vals), s.nodes)
    except BudgetExceeded:
        return Timeout(s.nodes)
    return Unsat(s.nodes)


def enumerate_colorings(sk: Skeleton, mode, vertices, fixed=None, budget=None):
    s = CardinalitySearch(sk.edges, local_constraints(sk, mode, vertices), fixed)
    return [s.as_dict(vals) for vals in s.solutions(budget)]
