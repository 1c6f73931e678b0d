"""Supersaturation constraint for color i and its tangent cuts.

For a realizable density vector x and a color i with r = r[i] >= 3, let
Y = sum_{j != i} x_iij (non-i edges per color-i neighborhood, averaged) and
F = sum_{T without i} x_T.  Two lower bounds g(Y) <= r * F are available:

    stated:   g(Y) = C(r,3) rho (2 rho - 1),  rho = Y / C(r,2)
    goodman:  g(Y) = Y (4 Y - r^2) / (3 r)

The goodman form is Goodman's finite triangle bound applied per vertex.  The
stated form assumes at least C(N,3) rho (2 rho - 1) triangles in any N-vertex
graph of density rho, which only holds asymptotically: the 4-cycle has rho = 2/3
and no triangles.  Both g are convex quadratics, so the per-vertex bounds
average without clipping at zero and every tangent line is a linear cut.
Cuts default to the goodman form because only it is valid for every graph.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .simplex import Feasible, Infeasible, Unknown, solveFeasibility
from .system import LE, RationalLinearSystem, TriangleDensityVector, triples, xname

STATED, GOODMAN = "stated", "goodman"
FORMS = (STATED, GOODMAN)


def _quadratic(ri, form):
    """(a, b) with g(Y) = a Y^2 + b Y."""
    if form == STATED:
        k3, k2 = math.comb(ri, 3), math.comb(ri, 2)
        return Fraction(2 * k3, k2 * k2), Fraction(-k3, k2)
    if form == GOODMAN:
        return Fraction(4, 3 * ri), Fraction(-ri, 3)
    raise ValueError("unknown supersaturation form %r" % (form,))


def _parts(t, i):
    """(names of triples avoiding i, names of triples of type iij with j != i)."""
    free = [xname(T) for T in triples(t) if i not in T]
    pair = [xname(T) for T in triples(t) if sum(1 for a in T if a == i) == 2]
    return free, pair


def _pair_sum(point, pair):
    return sum(Fraction(point.get(v, 0)) for v in pair)


def supersaturationCheck(r, x, i, form=STATED):
    """Exact slack r[i] F - g(Y); math.inf when r[i] < 3 (constraint vacuous)."""
    ri = int(r[i - 1])
    if ri < 3:
        return math.inf
    point = x.point() if isinstance(x, TriangleDensityVector) else x
    free, pair = _parts(len(r), i)
    lhs = ri * sum(Fraction(point.get(v, 0)) for v in free)
    Y = _pair_sum(point, pair)
    a, b = _quadratic(ri, form)
    return lhs - (a * Y * Y + b * Y)


def supersaturationCut(r, point, i, rho0=None, form=STATED):
    """Tangent cut at density rho0, as (coeffs, '<=', rhs, label).

    With Y0 = rho0 C(r,2), g(Y) >= (2 a Y0 + b) Y - a Y0^2, so
    -r sum_free x + (2 a Y0 + b) sum_pair x <= a Y0^2.
    The tangent point defaults to the density of `point`.
    """
    ri = int(r[i - 1])
    if ri < 3:
        return None
    point = point.point() if isinstance(point, TriangleDensityVector) else point
    free, pair = _parts(len(r), i)
    k2 = math.comb(ri, 2)
    if rho0 is None:
        rho0 = _pair_sum(point, pair) / k2
    a, b = _quadratic(ri, form)
    Y0 = Fraction(rho0) * k2
    coeffs = {v: Fraction(-ri) for v in free}
    slope = 2 * a * Y0 + b
    for v in pair:
        coeffs[v] = coeffs.get(v, 0) + slope
    tag = "" if form == STATED else form + "-"
    return coeffs, LE, a * Y0 * Y0, "%scut[%d]@rho=%s" % (tag, i, rho0)


def separating_cut(r, point, i, form=STATED):
    """Tangent cut violated at `point`, using the simplest nearby tangent point.

    At the witness the cut's slack is the check's slack plus a (Y - Y0)^2,
    so a rounded rho0 still separates once that term is below the violation.
    """
    slack = supersaturationCheck(r, point, i, form)
    if slack >= 0:
        return None
    ri = int(r[i - 1])
    _, pair = _parts(len(r), i)
    k2 = math.comb(ri, 2)
    rho = _pair_sum(point, pair) / k2
    a, _ = _quadratic(ri, form)
    d = 16
    while True:
        rho0 = rho.limit_denominator(d)
        if a * (k2 * (rho - rho0)) ** 2 < -slack:
            return supersaturationCut(r, point, i, rho0, form)
        d *= 16


def cut_value(cut, point):
    coeffs, _, rhs, _ = cut
    return rhs - sum(a * Fraction(point.get(v, 0)) for v, a in coeffs.items())


def refuteWithCuts(sys_: RationalLinearSystem, cutColors=None, maxRounds=50, form=GOODMAN):
    """Solve, add separating tangent cuts for violated colors, repeat.

    With the goodman form, Infeasible is sound because every cut holds for
    realizable vectors.  Feasible means the witness also satisfies every
    supersaturation check of that form.
    """
    r = sys_.meta.get("r")
    t = sys_.t
    cutColors = list(range(1, t + 1)) if cutColors is None else list(cutColors)
    cur = sys_.copy()
    best = {}
    for rnd in range(maxRounds + 1):
        res = solveFeasibility(cur)
        if isinstance(res, Infeasible):
            res.rounds = rnd
            res.system = cur
            return res
        best = res.witness
        added = 0
        for i in cutColors:
            cut = separating_cut(r, best, i, form)
            if cut is not None:
                cur.add(*cut)
                added += 1
        if not added:
            res.rounds = rnd
            res.system = cur
            return res
    out = Unknown(best, note="no verdict after %d cut rounds" % maxRounds)
    out.rounds = maxRounds
    out.system = cur
    return out
