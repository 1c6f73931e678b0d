"""Explicit constructions: clique products, the three near-complete Cayley
shapes, graphs built from feasible density vectors, and flip graphs.

Large products are handled symbolically through ProfileTerm sums; small
factors are materialized and checked against their claimed profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .abelian import AbelianGroup, SymmetricSet, additiveTriples, enumerate_group_types
from .graph import (ColoredGraph, GraphError, ProfileTerm, addProfiles, checkFlip,
                    checkTriangleRegular, complete_bipartite, complete_graph, flipViolation,
                    productOf, single_vertex)
from .lp.system import TriangleDensityVector, graphDensityVector


class ConstructionError(ValueError):
    pass


def _embed_graph(g: ColoredGraph, t: int, colors=None) -> ColoredGraph:
    """Recolor g (colors 1..g.t) into colors[...] of a t-color space."""
    colors = colors or list(range(1, g.t + 1))
    return ColoredGraph(t, g.n, [(u, v, colors[c - 1]) for u, v, c in g.edges])


def _term(t, deg, nbhd, desc):
    r = [0] * t
    c = [0] * t
    for col, d in deg.items():
        r[col - 1] += d
    for col, d in nbhd.items():
        c[col - 1] += d
    return ProfileTerm(tuple(r), tuple(c), desc)


def _sum_terms(terms, t):
    total = ProfileTerm(tuple([0] * t), tuple([0] * t), "")
    for f in terms:
        total = addProfiles(total, f)
    return ProfileTerm(total.r, total.c, " x ".join(f.factorDescription for f in terms))


def _shift_term(term: ProfileTerm, t, colors):
    r = [0] * t
    c = [0] * t
    for k, col in enumerate(colors):
        r[col - 1] += term.r[k]
        c[col - 1] += term.c[k]
    return ProfileTerm(tuple(r), tuple(c), term.factorDescription)


# ---- clique products ----

@dataclass(frozen=True)
class CliqueProductPlan:
    cliqueSizes: tuple  # nonincreasing, each >= 2

    @property
    def r(self):
        return sum(a - 1 for a in self.cliqueSizes)

    @property
    def c(self):
        return sum(math.comb(a - 1, 2) for a in self.cliqueSizes)


def _reach_table(r, c):
    """reach[d, k]: some multiset of parts (a - 1) sums to d with sum C(a - 1, 2) = k."""
    reach = np.zeros((r + 1, c + 1), dtype=bool)
    reach[0, 0] = True
    for d in range(1, r + 1):
        w = math.comb(d, 2)
        if w > c:
            break
        for deg in range(d, r + 1):
            reach[deg, w:] |= reach[deg - d, :c + 1 - w]
    return reach


def cliqueProductDecompose(r, c):
    """Clique sizes with sum(a - 1) = r and sum C(a - 1, 2) = c, or None.

    Exact DP; the reconstruction prefers large cliques first.
    """
    if r < 0 or c < 0:
        raise ConstructionError("r and c must be nonnegative")
    if c > math.comb(r, 2):
        raise ConstructionError("c = %d exceeds C(%d, 2) = %d" % (c, r, math.comb(r, 2)))
    reach = _reach_table(r, c)
    if not reach[r, c]:
        return None
    sizes = []
    deg, k = r, c
    while deg > 0:
        for d in range(deg, 0, -1):
            w = math.comb(d, 2)
            if w <= k and reach[deg - d, k - w]:
                sizes.append(d + 1)
                deg, k = deg - d, k - w
                break
    return CliqueProductPlan(tuple(sizes))


def clique_product_report(r, c):
    """Distinguishes 'no clique-product plan' from 'outside the guaranteed range'."""
    plan = cliqueProductDecompose(r, c)
    guaranteed = c <= math.comb(r, 2) - 5 * r ** 1.5
    return {"r": r, "c": c, "plan": list(plan.cliqueSizes) if plan else None,
            "inGuaranteedRange": guaranteed,
            "status": "plan" if plan else ("no-clique-product-plan" if guaranteed or c <= math.comb(r, 2)
                                           else "outside-range")}


def buildCliqueProduct(plan: CliqueProductPlan) -> SymmetricSet:
    """Z_a1 x ... x Z_ak with S = elements nonzero in exactly one coordinate."""
    sizes = list(plan.cliqueSizes)
    if not sizes:
        raise ConstructionError("empty plan has no group (the single-vertex graph)")
    g = AbelianGroup(sizes)
    members = []
    for j, a in enumerate(sizes):
        for v in range(1, a):
            x = [0] * len(sizes)
            x[j] = v
            members.append(tuple(x))
    return SymmetricSet(g, members)


def direct_sum(S1: SymmetricSet, S2: SymmetricSet) -> SymmetricSet:
    """S1 x {0} union {0} x S2 in G1 x G2: the Cartesian product of the Cayley graphs."""
    g = AbelianGroup(S1.group.moduli + S2.group.moduli)
    z1, z2 = S1.group.zero, S2.group.zero
    return SymmetricSet(g, [x + z2 for x in S1.members] + [z1 + y for y in S2.members])


# ---- the three near-complete shapes ----

@dataclass(frozen=True)
class Theorem13Params:
    r: int
    x: int
    y: int
    caseTag: int = 0

    def __post_init__(self):
        object.__setattr__(self, "caseTag", case_tag(self.r, self.x))


def case_tag(r, x):
    if x % 2 == 0:
        return 1
    return 2 if (2 * r - x) % 4 == 3 else 3


# c(G_1) - C(r,2) + rx/2 for the outer factor of each case, from its triple count
CASE_OFFSET = {
    1: lambda x: Fraction(x * x + 2 * x, 8),
    2: lambda x: Fraction(x * x + 2 * x - 3, 8),
    3: lambda x: Fraction(x * x + 2 * x + 9, 8),
}

# offsets as usually stated for cases 2 and 3; they agree with CASE_OFFSET
# only when the inner degree (x - 1)/2 resp. (x - 3)/2 is zero
STATED_CASE_OFFSET = {
    1: CASE_OFFSET[1],
    2: lambda x: Fraction(x * x - 2 * x + 1, 8),
    3: lambda x: Fraction(x * x - 2 * x + 21, 8),
}


def y_range_ok(x, y):
    """x^2/8 + 3x <= y <= x^2/4 - 4 x^(3/2), decided exactly."""
    if 8 * y < x * x + 24 * x:
        return False
    gap = x * x - 4 * y  # need gap >= 16 x^(3/2)
    return gap >= 0 and gap * gap >= 256 * x ** 3


def y_range(x):
    """Integer y accepted by y_range_ok, as (lo, hi), or None when empty."""
    lo = -(-(x * x + 24 * x) // 8)
    hi = (x * x) // 4
    while hi >= lo and not y_range_ok(x, hi):
        hi -= 1
    return (lo, hi) if hi >= lo else None


def outer_set(r, x):
    """(case, first-factor symmetric set, inner degree, removed set or None)."""
    case = case_tag(r, x)
    if case == 1:
        M = r - x // 2 + 1
        return case, SymmetricSet(AbelianGroup([M]), [(v,) for v in range(1, M)]), x // 2, None
    if case == 2:
        M = (2 * r - x + 5) // 2
        removed = {(2 * r - x + 5) // 4}
        inner = (x - 1) // 2
    else:
        M = (2 * r - x + 11) // 2
        removed = {(2 * r - x + 7) // 4, (2 * r - x + 11) // 4, (2 * r - x + 15) // 4}
        inner = (x - 3) // 2
    S = SymmetricSet(AbelianGroup([M]), [(v,) for v in range(1, M) if v not in removed])
    return case, S, inner, frozenset(removed)


def is_sum_free(removed, M):
    return not any((a + b) % M in removed for a in removed for b in removed)


@dataclass
class Theorem13Result:
    params: Theorem13Params
    strict: bool
    generatingSet: SymmetricSet
    innerPlan: tuple
    k: Fraction
    offset: Fraction
    targetC: Fraction
    achievedC: Fraction
    sumFree: bool = None

    @property
    def ok(self):
        return self.achievedC == self.targetC

    def to_json(self):
        p = self.params
        return {"r": p.r, "x": p.x, "y": p.y, "case": p.caseTag, "strict": self.strict,
                "groupModuli": list(self.generatingSet.group.moduli)[:8] + (
                    ["..."] if self.generatingSet.group.rank > 8 else []),
                "groupRank": self.generatingSet.group.rank, "setSize": len(self.generatingSet),
                "innerPlan": list(self.innerPlan), "k": str(self.k), "offset": str(self.offset),
                "statedOffset": str(STATED_CASE_OFFSET[p.caseTag](p.x)),
                "targetC": str(self.targetC), "achievedC": str(self.achievedC),
                "sumFree": self.sumFree, "ok": self.ok}


def theorem13GeneratingSet(r, x, y, strict=True, inner: SymmetricSet = None) -> Theorem13Result:
    """Product generating set for c = C(r,2) - rx/2 + y, checked by triple counting.

    strict enforces x <= r and the y-range; diagnostic mode (strict=False)
    builds the case shape for any parameters.  `inner` overrides the
    clique-product inner factor (diagnostic mode only).
    """
    if not 0 <= x <= r:
        raise ConstructionError("need 0 <= x <= r")
    p = Theorem13Params(r, x, y)
    if strict:
        if inner is not None:
            raise ConstructionError("strict mode derives the inner factor itself")
        if not y_range_ok(x, y):
            rng = y_range(x)
            raise ConstructionError("y = %s outside the admissible range for x = %d (%s)" % (
                y, x, "empty" if rng is None else "%d..%d" % rng))
    case, S1, inner_deg, removed = outer_set(r, x)
    offset = CASE_OFFSET[case](x)
    k = y - offset
    sum_free = None
    if removed is not None:
        sum_free = is_sum_free(removed, S1.group.moduli[0])
        if strict and not sum_free:
            raise ConstructionError("removed set %s is not sum-free" % sorted(removed))
    plan = ()
    if inner is None:
        if inner_deg < 0 or k.denominator != 1 or k < 0:
            raise ConstructionError("inner budget k = %s is not a nonnegative integer" % k)
        if k > math.comb(inner_deg, 2):
            raise ConstructionError("inner budget k = %s exceeds C(%d, 2)" % (k, inner_deg))
        pl = cliqueProductDecompose(inner_deg, int(k))
        if pl is None:
            raise ConstructionError("no clique-product inner factor for (%d, %s)" % (inner_deg, k))
        plan = pl.cliqueSizes
        S = direct_sum(S1, buildCliqueProduct(pl)) if plan else S1
    else:
        if len(inner) != inner_deg:
            raise ConstructionError("inner set has size %d, case %d needs %d" % (len(inner), case, inner_deg))
        S = direct_sum(S1, inner)
    count, _ = additiveTriples(S)
    target = math.comb(r, 2) - Fraction(r * x, 2) + y
    return Theorem13Result(p, strict, S, plan, k, offset, target, Fraction(count, 2), sum_free)


# ---- graphs from feasible density vectors ----

def regular_bipartite(p, d, color, t):
    """Left j joined to right j, j+1, ..., j+d-1 mod p; complete when d >= p."""
    d = min(d, p)
    return ColoredGraph(t, 2 * p, [(j, p + (j + e) % p, color) for j in range(p) for e in range(d)])


def four_part_graph(p, roles, d, t):
    """Parts P0..P3 of size p; roles = (a, b, c) colors.

    b: complete between P0-P1 and P2-P3; c: complete between P0-P2 and P1-P3;
    a: d-regular circulant between P0-P3 and P1-P2.  Every triangle meets three
    parts and has colors {a, b, c}.
    """
    a, b, c = roles
    P = [list(range(k * p, (k + 1) * p)) for k in range(4)]
    edges = []
    for (x, y), col in (((0, 1), b), ((2, 3), b), ((0, 2), c), ((1, 3), c)):
        edges += [(u, v, col) for u in P[x] for v in P[y]]
    dd = min(d, p)
    for x, y in ((0, 3), (1, 2)):
        edges += [(P[x][j], P[y][(j + e) % p], a) for j in range(p) for e in range(dd)]
    return ColoredGraph(t, 4 * p, edges)


@dataclass
class LpBuildReport:
    graph: ColoredGraph
    r: tuple
    cTarget: tuple
    cAchieved: tuple
    factors: list
    collapsed: list  # colors with r[i] < t^2
    ratio: list = field(default_factory=list)

    def to_json(self):
        return {"r": list(self.r), "cTarget": list(self.cTarget), "cAchieved": list(self.cAchieved),
                "vertices": self.graph.n, "factors": self.factors, "collapsed": self.collapsed,
                "ratio": [None if q is None else str(q) for q in self.ratio]}


def lpToGraph(r, c, x: TriangleDensityVector, strict=False, maxVertices=200000) -> LpBuildReport:
    """Product of per-triple factor graphs, padded with bipartite factors to degrees r.

    Sizes are floored to integers.  A clique K_y has normalized density
    C(y-1, 2)/3 of its triangle type, so the iii factor is the largest clique
    whose density does not exceed x_iii (and whose degree stays <= r_i / t^2).
    strict refuses any r[i] < t^2; otherwise those colors are recorded as collapsed.
    """
    r = tuple(int(a) for a in r)
    c = tuple(int(a) for a in c)
    t = len(r)
    T2 = t * t
    collapsed = [i + 1 for i in range(t) if r[i] < T2]
    if strict and collapsed:
        raise ConstructionError("r[i] < t^2 for colors %s: part sizes collapse" % collapsed)
    factors = []
    graphs = []
    for T, val in x.as_map().items():
        val = Fraction(val)
        if val <= 0:
            continue
        i, j, k = T
        if i == j == k:
            # largest y with C(y-1, 2)/3 <= x_iii, capped so the degree stays <= r_i / t^2
            y = 1
            while math.comb(y, 2) <= 3 * val:
                y += 1
            y = min(y, r[i - 1] // T2 + 1)
            if y >= 2:
                graphs.append(complete_graph(y, color=i, t=t))
                factors.append("K_%d[color %d]" % (y, i))
            continue
        cols = sorted(T, key=lambda col: (r[col - 1], col))
        a, b, cc = cols
        d = r[a - 1] // T2
        if d == 0:
            continue
        y = int(val // (2 * d))
        p = min(y, r[b - 1] // T2)
        if len(set(T)) == 2:
            p //= 2
        if p <= 0:
            continue
        graphs.append(four_part_graph(p, (a, b, cc), d, t))
        factors.append("4x%d parts %s d=%d" % (p, "".join(map(str, T)), min(d, p)))
    deg = [0] * t
    for g in graphs:
        prof = checkTriangleRegular(g)
        if not prof.uniform:
            raise ConstructionError("factor is not triangle-regular: %s" % prof)
        for i in range(t):
            deg[i] += prof.r[i]
    for i in range(t):
        D = r[i] - deg[i]
        if D < 0:
            raise ConstructionError("color %d degree %d exceeds r = %d" % (i + 1, deg[i], r[i]))
        if D > 0:
            graphs.append(complete_bipartite(D, D, color=i + 1, t=t))
            factors.append("K_%d,%d[color %d]" % (D, D, i + 1))
    size = 1
    for g in graphs:
        size *= g.n
    if size > maxVertices:
        raise ConstructionError("product would have %d vertices (cap %d)" % (size, maxVertices))
    G = productOf(graphs) if graphs else single_vertex(t)
    prof = checkTriangleRegular(G)
    if not prof.uniform:
        raise ConstructionError("product is not triangle-regular: %s" % prof)
    if tuple(prof.r) != r:
        raise ConstructionError("degree mismatch %s vs %s" % (prof.r, r))
    ratio = [None if c[i] == 0 else Fraction(prof.c[i], c[i]) for i in range(t)]
    return LpBuildReport(G, r, c, tuple(prof.c), factors, collapsed, ratio)


# ---- flip constructions ----

@dataclass
class FlipConstructionReport:
    factors: list  # ProfileTerm
    total: ProfileTerm
    flipValid: bool
    density: TriangleDensityVector
    violation: object = None
    crossChecks: list = field(default_factory=list)  # (description, ok)
    params: dict = field(default_factory=dict)

    @property
    def degrees(self):
        return self.total.r

    @property
    def closed(self):
        return tuple(a + b for a, b in zip(self.total.r, self.total.c))

    def to_json(self):
        return {"params": self.params, "degrees": list(self.total.r), "c": list(self.total.c),
                "closed": list(self.closed), "flipValid": self.flipValid,
                "violation": str(self.violation) if self.violation else None,
                "factors": [{"r": list(f.r), "c": list(f.c), "description": f.factorDescription}
                            for f in self.factors],
                "crossChecks": [{"factor": d, "ok": ok} for d, ok in self.crossChecks]}


def _finish(factors, densities, t, checks, params):
    total = _sum_terms(factors, t)
    bad = flipViolation(total.r, total.c)
    dens = TriangleDensityVector.zeros(t)
    for dv in densities:
        dens = dens + dv
    return FlipConstructionReport(factors, total, bad is None, dens, bad, checks, params)


def _cross_check(g: ColoredGraph, term: ProfileTerm, dens: TriangleDensityVector):
    prof = checkTriangleRegular(g)
    return prof.uniform and tuple(prof.r) == term.r and tuple(prof.c) == term.c and graphDensityVector(g) == dens


def two_clique_graph(m, t=3, c1=1, c2=2):
    """Two color-c1 cliques on m + 1 vertices joined by a complete bipartite graph in color c2."""
    k = m + 1
    edges = [(u, v, c1) for side in (0, k) for u in range(side, side + k) for v in range(u + 1, side + k)]
    edges += [(u, k + w, c2) for u in range(k) for w in range(k)]
    return ColoredGraph(t, 2 * k, edges)


def flip3Construction(a1, materialize_limit=400) -> FlipConstructionReport:
    """Degrees (a1, a1 + 1, (a1 - 2 ceil(sqrt a1))^2) from four factors.

    Factors: two color-1 K_{m+1} joined in color 2 (m = a1 - 2q, q = ceil(sqrt a1)),
    a color-1 K_{2q+1}, a color-2 K_{2q,2q}, a color-3 K_{m^2,m^2}.
    """
    q = math.isqrt(a1 - 1) + 1 if a1 > 0 else 0
    m = a1 - 2 * q
    if m < 1:
        raise ConstructionError("a1 = %d too small: a1 - 2 ceil(sqrt(a1)) = %d" % (a1, m))
    t = 3
    # N(v) = the rest of v's clique plus the whole other clique
    f1 = _term(t, {1: m, 2: m + 1}, {1: m * m, 2: m * m + m}, "two K_%d[1] joined by K_%d,%d[2]" % (m + 1, m + 1, m + 1))
    f2 = _term(t, {1: 2 * q}, {1: math.comb(2 * q, 2)}, "K_%d[1]" % (2 * q + 1))
    f3 = _term(t, {2: 2 * q}, {}, "K_%d,%d[2]" % (2 * q, 2 * q))
    f4 = _term(t, {3: m * m}, {}, "K_%d,%d[3]" % (m * m, m * m))
    d1 = TriangleDensityVector.from_map(t, {(1, 1, 1): Fraction(m * (m - 1), 6), (1, 2, 2): Fraction(m * (m + 1), 2)})
    d2 = TriangleDensityVector.from_map(t, {(1, 1, 1): Fraction(math.comb(2 * q, 2), 3)})
    zero = TriangleDensityVector.zeros(t)
    checks = []
    mats = [(2 * m + 2, lambda: two_clique_graph(m), f1, d1),
            (2 * q + 1, lambda: complete_graph(2 * q + 1, 1, t), f2, d2),
            (4 * q, lambda: complete_bipartite(2 * q, 2 * q, 2, t), f3, zero),
            (2 * m * m, lambda: complete_bipartite(m * m, m * m, 3, t), f4, zero)]
    for n, build, term, dens in mats:
        if n <= materialize_limit:
            checks.append((term.factorDescription, _cross_check(build(), term, dens)))
    return _finish([f1, f2, f3, f4], [d1, d2, zero, zero], t, checks,
                   {"a1": a1, "q": q, "m": m, "a3": m * m})


def bipartite_color(a, b, t):
    return 2 + (a + b) % (t - 1)


def split_graph(t, s):
    """2 s (t-1) color-1 cliques of size 8 - t, halves joined by a complete
    bipartite graph whose edge (a, b) gets color 2 + (a + b) mod (t - 1)."""
    k = 8 - t
    h = s * (t - 1)
    N = h * k
    edges = []
    for side in (0, N):
        for q in range(h):
            base = side + q * k
            edges += [(base + u, base + v, 1) for u in range(k) for v in range(u + 1, k)]
    edges += [(a, N + b, bipartite_color(a, b, t)) for a in range(N) for b in range(N)]
    return ColoredGraph(t, 2 * N, edges)


def split_graph_term(t, s):
    k = 8 - t
    deg = {1: k - 1}
    nbhd = {1: (s * (t - 1) + 1) * math.comb(k, 2) - (k - 1)}
    for col in range(2, t + 1):
        deg[col] = s * k
        nbhd[col] = s * k * k - s * k
    return _term(t, deg, nbhd, "split(t=%d, s=%d)" % (t, s))


def split_graph_density(t, s):
    """Exact triangle-type counts divided by n, by residue bookkeeping."""
    k = 8 - t
    h = s * (t - 1)
    N = h * k
    per = N // (t - 1)  # vertices of the other side in each residue class
    counts = {}
    for q in range(h):
        idx = [q * k + u for u in range(k)]
        for x in range(k):
            for y in range(x + 1, k):
                for rho in range(t - 1):
                    T = tuple(sorted((1, 2 + (idx[x] + rho) % (t - 1), 2 + (idx[y] + rho) % (t - 1))))
                    counts[T] = counts.get(T, 0) + 2 * per  # both sides contribute alike
    n = 2 * N
    counts[(1, 1, 1)] = 2 * h * math.comb(k, 3)
    return TriangleDensityVector.from_map(t, {T: Fraction(v, n) for T, v in counts.items()})


FLIP3_DEFAULT_A1 = 12  # smallest a1 whose flip3 profile is a flip sequence


def default_inner(t):
    """Flip construction on t - 1 colors used for the colors 2..t part."""
    if t - 1 == 3:
        return flip3Construction(FLIP3_DEFAULT_A1)
    if t - 1 in (4, 5):
        inner = default_inner(t - 1)
        return unboundedFlipConstruction(t - 1, min_scale(t - 1, inner), inner)
    raise ConstructionError("no default inner flip construction for t = %d" % t)


def min_scale(t, inner: FlipConstructionReport):
    """Smallest s making color 1 dominate the closed neighborhoods."""
    k = 8 - t
    gain = (t - 1) * math.comb(k, 2) - k * k
    if gain <= 0:
        raise ConstructionError("(t-1) C(8-t,2) <= (8-t)^2 for t = %d" % t)
    need = inner.closed[0] - math.comb(k, 2)  # s * gain > need
    return max(1, need // gain + 1)


def unboundedFlipConstruction(t, s, inner: FlipConstructionReport = None, materialize_limit=600) -> FlipConstructionReport:
    """Color-1 degree 7 - t with every other degree growing linearly in s.

    The split graph is multiplied by a flip construction on colors 2..t; the
    result is a flip graph once s((t-1)C(8-t,2) - (8-t)^2) + C(8-t,2) exceeds
    the inner closed count of its first color.
    """
    if t not in (4, 5, 6):
        raise ConstructionError("t must be 4, 5 or 6")
    if s < 1:
        raise ConstructionError("scale must be >= 1")
    if inner is None:
        inner = default_inner(t)
    if len(inner.total.r) != t - 1:
        raise ConstructionError("inner construction must have t - 1 colors")
    term = split_graph_term(t, s)
    dens = split_graph_density(t, s)
    checks = []
    if 2 * s * (t - 1) * (8 - t) <= materialize_limit:
        checks.append((term.factorDescription, _cross_check(split_graph(t, s), term, dens)))
    colors = list(range(2, t + 1))
    inner_term = _shift_term(inner.total, t, colors)
    inner_term = ProfileTerm(inner_term.r, inner_term.c, "inner flip on colors 2..%d" % t)
    inner_dens = inner.density.embed(colors, t)
    k = 8 - t
    params = {"t": t, "s": s, "gain": (t - 1) * math.comb(k, 2) - k * k,
              "innerDegrees": list(inner.total.r), "innerFlipValid": inner.flipValid,
              "inequality": "%d*%d + %d > %d" % (s, (t - 1) * math.comb(k, 2) - k * k, math.comb(k, 2),
                                                  inner.closed[0])}
    rep = _finish([term, inner_term], [dens, inner_dens], t, checks + inner.crossChecks, params)
    rep.flipValid = rep.flipValid and inner.flipValid
    return rep


# ---- small flip graph search ----

def colored_cayley_graph(group: AbelianGroup, classes: dict) -> ColoredGraph:
    """classes: color -> list of elements; each class must be symmetric."""
    t = max(classes) if classes else 1
    tab = group.add_table
    edges = {}
    for col, elems in classes.items():
        for s in elems:
            si = group.index(s)
            for x in range(group.order):
                y = int(tab[x, si])
                e = (x, y) if x < y else (y, x)
                edges[e] = col
    return ColoredGraph(t, group.order, [(u, v, c) for (u, v), c in edges.items()])


def cayley_profile(group: AbelianGroup, classes: dict, t: int):
    """(deg, nbhd) at any vertex: nbhd_i = #{(a, b) in S x S : b - a in S_i} / 2."""
    col = {}
    for c, elems in classes.items():
        for s in elems:
            col[group.element(s)] = c
    S = list(col)
    deg = [0] * t
    nb = [0] * t
    for s, c in col.items():
        deg[c - 1] += 1
    for a in S:
        na = group.neg(a)
        for b in S:
            d = group.add(b, na)
            c = col.get(d)
            if c is not None:
                nb[c - 1] += 1
    return deg, [v // 2 for v in nb]


def _orbits(group: AbelianGroup):
    seen = set()
    out = []
    for x in group.elements():
        if x == group.zero or x in seen:
            continue
        nx = group.neg(x)
        orb = (x,) if nx == x else (x, nx)
        seen.update(orb)
        out.append(orb)
    return out


def findFlipGraph(t, nMax, budget=200000):
    """Search colorings of abelian Cayley graphs of order <= nMax for a flip graph.

    Each inverse pair {x, -x} gets a color in 0..t (0 = unused); every vertex
    of a Cayley graph has the same profile, so one vertex decides.  Returns a
    materialized ColoredGraph passing checkFlip, or None once the budget of
    candidate colorings is spent.
    """
    if t == 1:
        return complete_graph(2)
    tried = 0
    for n in range(2, nMax + 1):
        for moduli in enumerate_group_types(n):
            g = AbelianGroup(moduli)
            orbs = _orbits(g)
            if sum(len(o) for o in orbs) < t * (t + 1) // 2:
                continue  # degrees 1 <= deg_1 < ... < deg_t need t(t+1)/2 elements
            for assign in product(range(t + 1), repeat=len(orbs)):
                tried += 1
                if tried > budget:
                    return None
                deg = [0] * t
                for o, a in zip(orbs, assign):
                    if a:
                        deg[a - 1] += len(o)
                if deg[0] < 1 or any(deg[i + 1] <= deg[i] for i in range(t - 1)):
                    continue
                classes = {}
                for o, a in zip(orbs, assign):
                    if a:
                        classes.setdefault(a, []).extend(o)
                d, nb = cayley_profile(g, classes, t)
                if flipViolation(d, nb) is None:
                    G = colored_cayley_graph(g, classes)
                    G = ColoredGraph(t, G.n, G.edges)
                    if checkFlip(G).ok:
                        return G
    return None
