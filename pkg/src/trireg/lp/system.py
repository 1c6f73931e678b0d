"""Exact-rational constraint systems for triangle density vectors.

Variables x_T are indexed by color multisets T = (i, j, k) with i <= j <= k.
Optional variables c_i appear when the neighborhood counts are left free.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from ..graph import ColoredGraph, triangles

LE = "<="
EQ = "="


class SystemError_(ValueError):
    pass


def triples(t):
    return list(combinations_with_replacement(range(1, t + 1), 3))


def xname(T):
    sep = "" if max(T) < 10 else ","
    return "x_" + sep.join(str(i) for i in T)


def cname(i):
    return "c_%d" % i


@dataclass
class Constraint:
    coeffs: dict
    rel: str
    rhs: Fraction
    label: str = ""

    def value(self, point):
        return sum(Fraction(a) * point.get(v, 0) for v, a in self.coeffs.items())

    def holds(self, point):
        lhs = self.value(point)
        return lhs <= self.rhs if self.rel == LE else lhs == self.rhs

    def __str__(self):
        terms = " + ".join("%s*%s" % (a, v) for v, a in self.coeffs.items() if a != 0) or "0"
        return "%s: %s %s %s" % (self.label, terms, self.rel, self.rhs)


@dataclass
class RationalLinearSystem:
    """All variables are implicitly nonnegative."""
    variables: list
    constraints: list = field(default_factory=list)
    t: int = 0
    meta: dict = field(default_factory=dict)

    def add(self, coeffs, rel, rhs, label=""):
        for v in coeffs:
            if v not in self._varset():
                raise SystemError_("unknown variable %s" % v)
        if rel not in (LE, EQ):
            raise SystemError_("relation must be <= or =")
        self.constraints.append(Constraint(dict(coeffs), rel, Fraction(rhs), label))

    def _varset(self):
        return set(self.variables)

    def copy(self):
        return RationalLinearSystem(list(self.variables), list(self.constraints), self.t, dict(self.meta))

    def check(self, point):
        """Labels of violated constraints (nonnegativity included)."""
        bad = [v for v in self.variables if Fraction(point.get(v, 0)) < 0]
        bad += [c.label or str(c) for c in self.constraints if not c.holds(point)]
        return bad

    def counts(self):
        eq = sum(1 for c in self.constraints if c.rel == EQ)
        return {"variables": len(self.variables), "equalities": eq,
                "inequalities": len(self.constraints) - eq}

    def matrix(self):
        """(A rows as lists of Fractions, relations, rhs) in variable order."""
        idx = {v: i for i, v in enumerate(self.variables)}
        A = []
        for c in self.constraints:
            row = [Fraction(0)] * len(self.variables)
            for v, a in c.coeffs.items():
                row[idx[v]] += Fraction(a)
            A.append(row)
        return A, [c.rel for c in self.constraints], [c.rhs for c in self.constraints]


def _mult(T, i):
    return sum(1 for a in T if a == i)


def cross_coeffs(t, i, j):
    out = {}
    for T in triples(t):
        ci, cj = _mult(T, i), _mult(T, j)
        if ci == 1 and cj == 1:
            out[xname(T)] = 1
        elif (ci, cj) in ((2, 1), (1, 2)):
            out[xname(T)] = 2
    return out


def inner_coeffs(t, i):
    out = {}
    for T in triples(t):
        ci = _mult(T, i)
        if ci == 2:
            out[xname(T)] = 1
        elif ci == 3:
            out[xname(T)] = 3
    return out


def count_coeffs(t, i):
    return {xname(T): _mult(T, i) for T in triples(t) if _mult(T, i)}


def buildSystem(r, c=None, free_c=False) -> RationalLinearSystem:
    """Nonnegativity, pair bounds, per-color bounds and the neighborhood-count equalities.

    With free_c the counts c_i become variables instead of fixed right-hand sides.
    """
    r = [int(a) for a in r]
    t = len(r)
    if t < 1:
        raise SystemError_("need at least one color")
    if not free_c:
        c = [int(a) for a in c]
        if len(c) != t:
            raise SystemError_("r and c have different lengths")
    if any(a < 0 for a in r) or (not free_c and any(a < 0 for a in c)):
        raise SystemError_("r and c must be nonnegative")
    names = [xname(T) for T in triples(t)]
    if free_c:
        names += [cname(i) for i in range(1, t + 1)]
    sys_ = RationalLinearSystem(names, t=t, meta={"r": r, "c": None if free_c else c, "free_c": free_c})
    for i, j in combinations(range(1, t + 1), 2):
        sys_.add(cross_coeffs(t, i, j), LE, r[i - 1] * r[j - 1], "cross[%d,%d]" % (i, j))
    for i in range(1, t + 1):
        sys_.add(inner_coeffs(t, i), LE, math.comb(r[i - 1], 2), "inner[%d]" % i)
    for i in range(1, t + 1):
        co = count_coeffs(t, i)
        if free_c:
            co[cname(i)] = -1
            sys_.add(co, EQ, 0, "count[%d]" % i)
        else:
            sys_.add(co, EQ, c[i - 1], "count[%d]" % i)
    return sys_


def addFlipConstraints(sys_: RationalLinearSystem, t=None, bounds=None) -> RationalLinearSystem:
    """Strict closed-neighborhood ordering r_i + c_i >= r_{i+1} + c_{i+1} + 1 with r fixed.

    bounds may carry 'r1_max' and 'rt_min', which are checked against the
    fixed degrees (they are conditions on r, not on the variables).
    """
    r = sys_.meta.get("r")
    if r is None or any(not isinstance(a, int) for a in r):
        raise SystemError_("flip constraints need the degree vector fixed to integers")
    t = sys_.t if t is None else t
    if t != sys_.t:
        raise SystemError_("t mismatch")
    out = sys_.copy()
    bounds = bounds or {}
    out.meta["flip"] = True
    deg_ok = all(r[i] + 1 <= r[i + 1] for i in range(t - 1))
    if "r1_max" in bounds:
        deg_ok = deg_ok and 0 <= r[0] <= bounds["r1_max"]
    if "rt_min" in bounds:
        deg_ok = deg_ok and r[-1] >= bounds["rt_min"]
    out.meta["degree_conditions"] = deg_ok
    if not deg_ok:
        # the degree conditions fail outright: record an explicit 0 <= -1 row
        out.add({}, LE, -1, "degree-conditions")
    if sys_.meta.get("free_c"):
        for i in range(1, t):
            out.add({cname(i + 1): 1, cname(i): -1}, LE, r[i - 1] - r[i] - 1, "flip[%d,%d]" % (i, i + 1))
    else:
        c = sys_.meta["c"]
        for i in range(1, t):
            if not r[i - 1] + c[i - 1] >= r[i] + c[i] + 1:
                out.add({}, LE, -1, "flip[%d,%d]" % (i, i + 1))
    return out


def flipSystem(r, bounds=None) -> RationalLinearSystem:
    return addFlipConstraints(buildSystem(r, free_c=True), len(r), bounds)


# ---- density vectors ----

@dataclass(frozen=True)
class TriangleDensityVector:
    t: int
    values: tuple  # Fractions in triples(t) order

    @staticmethod
    def zeros(t):
        return TriangleDensityVector(t, tuple(Fraction(0) for _ in triples(t)))

    @staticmethod
    def from_map(t, m):
        m = {tuple(sorted(k)): Fraction(v) for k, v in m.items()}
        return TriangleDensityVector(t, tuple(m.get(T, Fraction(0)) for T in triples(t)))

    def as_map(self):
        return dict(zip(triples(self.t), self.values))

    def get(self, T):
        return self.as_map().get(tuple(sorted(T)), Fraction(0))

    def point(self):
        return {xname(T): v for T, v in zip(triples(self.t), self.values)}

    def __add__(self, other):
        if self.t != other.t:
            raise SystemError_("density vectors have different t")
        return TriangleDensityVector(self.t, tuple(a + b for a, b in zip(self.values, other.values)))

    def implied_c(self):
        return [sum(_mult(T, i) * v for T, v in zip(triples(self.t), self.values))
                for i in range(1, self.t + 1)]

    def embed(self, colors, t):
        """Relabel colors 1..self.t to the given colors inside a t-color space."""
        out = {}
        for T, v in zip(triples(self.t), self.values):
            out[tuple(sorted(colors[a - 1] for a in T))] = v
        return TriangleDensityVector.from_map(t, out)


def graphDensityVector(g: ColoredGraph) -> TriangleDensityVector:
    cnt = Counter()
    for u, v, w in triangles(g):
        T = tuple(sorted((g.color(u, v), g.color(u, w), g.color(v, w))))
        cnt[T] += 1
    if g.n == 0:
        return TriangleDensityVector.zeros(g.t)
    return TriangleDensityVector.from_map(g.t, {T: Fraction(k, g.n) for T, k in cnt.items()})


def point_for(sys_: RationalLinearSystem, x: TriangleDensityVector, c=None):
    p = x.point()
    if sys_.meta.get("free_c"):
        cc = x.implied_c() if c is None else c
        for i, v in enumerate(cc, 1):
            p[cname(i)] = Fraction(v)
    return p
