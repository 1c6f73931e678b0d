"""The ten acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line (printed in the terminal summary).
Parts that cannot hold as stated are strict xfails: they run in full, print
FAIL, and would turn the suite red if they ever started passing.
"""

import math
import os
import random
import time
from fractions import Fraction
from itertools import product

import pytest

from conftest import ACCEPTANCE
from oracles import naive_triples
from trireg.abelian import (AbelianGroup, SymmetricSet, additiveTriples, approxSubgroup, cayleyGraph,
                            enumerate_group_types, plancherel_defect, enumerateSubgroups)
from trireg.constructions import (CASE_OFFSET, STATED_CASE_OFFSET, buildCliqueProduct, case_tag,
                                  cliqueProductDecompose, colored_cayley_graph, complete_bipartite, default_inner,
                                  findFlipGraph,
                                  flip3Construction, lpToGraph, min_scale, outer_set, split_graph,
                                  theorem13GeneratingSet, two_clique_graph, unboundedFlipConstruction)
from trireg.graph import (ColoredGraph, cartesianProduct, checkFlip, checkTriangleRegular, complete_graph,
                          cycle_graph, petersen_graph)
from trireg.lp import (GOODMAN, STATED, Feasible, Infeasible, TriangleDensityVector, buildSystem,
                       flipBoundedScan, flipSystem, graphDensityVector, refuteWithCuts, solveFeasibility,
                       supersaturationCheck, verifyCertificate, verifyWitness)
from trireg.lp.system import point_for
from trireg.reductions import (NAE, ONE_IN_THREE, FlipMode, RcMode, Unsat, assignmentToColoring,
                               buildFlipReduction, buildRcReduction, bruteForceSat, checkRigidity,
                               gadget_cluster, loadFormula, loadTemplate, repeated_clause_instance,
                               solveColoring, verifyColoring)
from trireg.spectrum import forbiddenBandCheck, inverse_orbits

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "src", "trireg", "reductions", "fixtures")


def record(num, part, ok, detail, seconds=None):
    tag = "%d%s" % (num, part)
    extra = "" if seconds is None else " [%.1fs]" % seconds
    ACCEPTANCE.append((num, part, "CRITERION %-3s %s  %s%s" % (tag + ":", "PASS" if ok else "FAIL", detail, extra)))
    print(ACCEPTANCE[-1][2])


# ---- 1: Cayley/graph consistency ----

def test_criterion_1_cayley_consistency():
    t0 = time.time()
    rng = random.Random(1)
    types = [m for n in range(2, 31) for m in enumerate_group_types(n)]
    bad = []
    for _ in range(1000):
        G = AbelianGroup(rng.choice(types))
        members = [G.unindex(i) for o in inverse_orbits(G) if rng.random() < 0.5 for i in o]
        S = SymmetricSet(G, members)
        prof = checkTriangleRegular(cayleyGraph(S))
        k, _ = additiveTriples(S)
        if not (prof.uniform and tuple(prof.r) == (len(S),) and tuple(prof.c) == (Fraction(k, 2),)
                and k == naive_triples(G.moduli, S.members)):
            bad.append((G.moduli, sorted(S.members)))
    dt = time.time() - t0
    ok = not bad and dt < 30
    record(1, "", ok, "1000 random sets, %d mismatches" % len(bad), dt)
    assert ok


# ---- 2: forbidden band ----

def test_criterion_2_band():
    t0 = time.time()
    lines, ok = [], True
    for r in range(4, 11):
        rep = forbiddenBandCheck(r, 28)
        ok &= rep.ok
        lines.append("r=%d band=%s inBand=%s tight=%s" % (r, list(rep.band), rep.inBand,
                                                         "-" if rep.tightValue is None else rep.tightFound))
    dt = time.time() - t0
    ok &= dt < 300
    record(2, "", ok, "order <= 28; " + "; ".join(lines), dt)
    assert ok


# ---- 3: near-complete construction ----

@pytest.mark.slow
@pytest.mark.parametrize("y", [154550, 156000])
def test_criterion_3a_strict_1100(y):
    t0 = time.time()
    res = theorem13GeneratingSet(1100, 1100, y, strict=True)
    dt = time.time() - t0
    want = math.comb(1100, 2) - 1100 * 1100 // 2 + y
    ok = res.ok and res.achievedC == want and dt < 120
    record(3, "a y=%d" % y, ok, "r=x=1100 y=%d: achieved c=%s, target %d" % (y, res.achievedC, want), dt)
    assert ok


def offset_rows():
    """(case, r, x, inner degree, measured offset) for small diagnostic shapes."""
    rows = []
    for r in range(8, 25):
        for x in range(0, min(r, 12) + 1):
            case, S1, d, _ = outer_set(r, x)
            k, _ = additiveTriples(S1)
            measured = Fraction(k, 2) - math.comb(r, 2) + Fraction(r * x, 2)
            rows.append((case, r, x, d, measured))
    return rows


def test_criterion_3b_corrected_offsets():
    rows = offset_rows()
    bad = [row for row in rows if row[4] != CASE_OFFSET[row[0]](row[2])]
    cases = sorted({row[0] for row in rows})
    ok = not bad and cases == [1, 2, 3]
    record(3, "b", ok, "corrected offsets (x^2+2x)/8, (x^2+2x-3)/8, (x^2+2x+9)/8 reproduced on %d shapes" % len(rows))
    assert ok


@pytest.mark.xfail(strict=True, reason="stated case-2/3 offsets are off by the inner degree; see ledger")
def test_criterion_3c_stated_offsets():
    rows = offset_rows()
    bad = [row for row in rows if row[4] != STATED_CASE_OFFSET[row[0]](row[2])]
    by_case = {c: sum(1 for row in bad if row[0] == c) for c in (1, 2, 3)}
    gap_is_degree = all(row[4] - STATED_CASE_OFFSET[row[0]](row[2]) == row[3] for row in bad)
    record(3, "c", not bad, "stated offsets: mismatches per case %s; every gap equals the inner degree: %s"
           % (by_case, gap_is_degree))
    assert not bad


# ---- 4: approximate subgroups ----

def test_criterion_4_approx_subgroup():
    t0 = time.time()
    sets = eps_small = 0
    worstK = Fraction(0)
    min_eps = Fraction(1)
    plancherel = 0.0
    fixed_ok = True
    fixed = 0
    bad = []
    for n in range(2, 21):
        for m in enumerate_group_types(n):
            G = AbelianGroup(m)
            orbs = inverse_orbits(G)
            for mask in range(1, 1 << len(orbs)):
                S = SymmetricSet(G, [G.unindex(i) for k, o in enumerate(orbs) if mask >> k & 1 for i in o])
                sets += 1
                res = approxSubgroup(S)
                plancherel = max(plancherel, plancherel_defect(S))
                min_eps = min(min_eps, res.epsilon)
                if res.epsilon <= Fraction(1, 20):
                    eps_small += 1
                    K = res.empirical_constant()
                    if K is None or K > 40000:
                        bad.append((m, sorted(S.members)))
                    else:
                        worstK = max(worstK, K)
            for H in enumerateSubgroups(G):
                if len(H) - 1 >= 6:
                    S = SymmetricSet(G, [h for h in H if h != G.zero])
                    res = approxSubgroup(S)
                    fixed += 1
                    fixed_ok &= res.subgroup == H and res.overlapRatio == 1
    dt = time.time() - t0
    ok = not bad and fixed_ok and plancherel <= 1e-9
    # pairs (a, -a) sum to 0, which is never in S, so eps >= 1/|S| > 0.05 here
    record(4, "", ok, "%d sets; %d with eps <= 0.05 (min eps %s, bound vacuous at order <= 20); "
           "worst K' %s; subgroup fixed point on %d subgroups: %s; max Plancherel defect %.1e"
           % (sets, eps_small, min_eps, worstK, fixed, fixed_ok, plancherel), dt)
    assert ok


# ---- 5: density necessity for constructed graphs ----

def constructed_graphs():
    """(name, graph) for every constructor output small enough to materialize."""
    out = [("K5", complete_graph(5)), ("C7", cycle_graph(7)), ("Petersen", petersen_graph()),
           ("K4,4", complete_bipartite(4, 4, 1, 1))]
    for r, c in [(4, 2), (6, 3), (7, 9), (8, 6), (9, 12)]:
        plan = cliqueProductDecompose(r, c)
        out.append(("clique-product(%d,%d)" % (r, c), cayleyGraph(buildCliqueProduct(plan))))
    for r, x, y in [(24, 8, 12), (13, 7, Fraction(17, 2)), (20, 11, 20), (21, 9, Fraction(33, 2))]:
        out.append(("near-complete(%d,%d,%s)" % (r, x, y),
                    cayleyGraph(theorem13GeneratingSet(r, x, y, strict=False).generatingSet)))
    for m in (2, 4, 6):
        out.append(("two-clique(%d)" % m, two_clique_graph(m)))
    for t, s in [(4, 1), (5, 1), (6, 1), (4, 2)]:
        out.append(("split(%d,%d)" % (t, s), split_graph(t, s)))
    for r, c, x in [([4], [6], {(1, 1, 1): 2}), ([1, 6], [1, 2], {(1, 2, 2): 1}),
                    ([9, 9], [12, 12], {(1, 1, 1): 4, (2, 2, 2): 4})]:
        out.append(("lpToGraph(%s,%s)" % (r, c),
                    lpToGraph(r, c, TriangleDensityVector.from_map(len(r), x)).graph))
    g1 = ColoredGraph(2, 5, complete_graph(5).edges)
    out.append(("K5 x C7[2]", cartesianProduct(g1, ColoredGraph(2, 7, [(u, v, 2) for u, v, _ in cycle_graph(7).edges]))))
    out.append(("rc reduction (uncolored)", buildRcReduction(repeated_clause_instance()).graph()))
    return out


def profile_algebra():
    """(name, r, c, density) for product constructions too large to materialize."""
    out = []
    for a1 in (16, 25, 36):
        rep = flip3Construction(a1)
        out.append(("flip3(%d)" % a1, list(rep.total.r), list(rep.total.c), rep.density))
    for t in (4, 5, 6):
        inner = default_inner(t)
        rep = unboundedFlipConstruction(t, min_scale(t, inner), inner)
        out.append(("unbounded(%d)" % t, list(rep.total.r), list(rep.total.c), rep.density))
    return out


def cayley_sweep(maxOrder=10, t=2):
    """Every t-coloring of the inverse orbits of every group of order <= maxOrder."""
    for n in range(2, maxOrder + 1):
        for m in enumerate_group_types(n):
            G = AbelianGroup(m)
            orbs = inverse_orbits(G)
            for cols in product(range(t + 1), repeat=len(orbs)):
                classes = {}
                for o, c in zip(orbs, cols):
                    if c:
                        classes.setdefault(c, []).extend(G.unindex(i) for i in o)
                g = colored_cayley_graph(G, classes)
                yield "cayley%s%s" % (m, cols), ColoredGraph(t, g.n, g.edges)


_PROFILES = []


def all_profiles():
    """(name, r, c, density) for every constructor output, computed once."""
    if not _PROFILES:
        graphs = constructed_graphs() + [("findFlipGraph(1)", findFlipGraph(1, 4))] + list(cayley_sweep())
        for name, g in graphs:
            prof = checkTriangleRegular(g)
            assert prof.uniform, name
            _PROFILES.append((name, list(prof.r), [int(v) for v in prof.c], graphDensityVector(g)))
        _PROFILES.extend(profile_algebra())
    return _PROFILES


def slack_violations(form):
    bad = []
    for name, r, c, x in all_profiles():
        for i in range(1, len(r) + 1):
            if supersaturationCheck(r, x, i, form) < 0:
                bad.append((name, i))
    return bad


def test_criterion_5a_necessity():
    t0 = time.time()
    rows = all_profiles()
    bad = [name for name, r, c, x in rows if buildSystem(r, c).check(x.point())]
    bad += slack_violations(GOODMAN)
    dt = time.time() - t0
    record(5, "a", not bad, "%d constructor outputs (incl. every 2-colored Cayley graph of order <= 10): "
           "system exact, Goodman-form slack >= 0; violations %s" % (len(rows), bad or "none"), dt)
    assert not bad


@pytest.mark.xfail(strict=True, reason="stated finite-N supersaturation bound is false (K6 on Z6); see ledger")
def test_criterion_5b_stated_slack():
    bad = slack_violations(STATED)
    record(5, "b", not bad, "stated-form slack over %d outputs: %d negative, first %s"
           % (len(all_profiles()), len(bad), bad[:3]))
    assert not bad


# ---- 6: t = 1 characterization ----

def test_criterion_6_t1():
    t0 = time.time()
    bad = []
    for r in range(0, 31):
        for c in range(0, math.comb(r, 2) + 4):
            s = buildSystem([r], [c])
            res = solveFeasibility(s)
            ok = (isinstance(res, Feasible) and verifyWitness(s, res)) if c <= math.comb(r, 2) else \
                (isinstance(res, Infeasible) and verifyCertificate(s, res))
            if not ok:
                bad.append((r, c))
    dt = time.time() - t0
    record(6, "", not bad, "r <= 30, c up to C(r,2)+3: %d mismatches, all witnesses/certificates exact" % len(bad), dt)
    assert not bad


# ---- 7: flip scans ----

@pytest.mark.slow
def test_criterion_7_flip_scans():
    t0 = time.time()
    ok = True
    rep2 = flipBoundedScan(2, 1, 50, r1Min=1)
    ok &= rep2.all_infeasible() and len(rep2.rows) == 49
    rep4 = flipBoundedScan(4, 2, 60)
    ok &= rep4.all_infeasible()
    table = []
    for t, rtMax in ((4, 60), (5, 30), (6, 22)):
        scan = rep4 if t == 4 else flipBoundedScan(t, 6 - t, rtMax)
        inner = default_inner(t)
        rep = unboundedFlipConstruction(t, min_scale(t, inner), inner)
        s = flipSystem(list(rep.degrees))
        feasible_row = rep.flipValid and rep.degrees[0] == 7 - t and not s.check(
            point_for(s, rep.density, list(rep.total.c)))
        ok &= scan.all_infeasible() and feasible_row
        table.append("t=%d: r1<=%d scan %d rows all infeasible=%s; r1=%d row %s feasible=%s"
                     % (t, 6 - t, len(scan.rows), scan.all_infeasible(), 7 - t, list(rep.degrees), feasible_row))
    dt = time.time() - t0
    ok &= dt < 600
    record(7, "", ok, "t=2 r1=1 (r2<=50) all infeasible; t=4 r1<=2 r4<=60 all infeasible; "
           "bound 7-t admits the construction rows, 6-t is the tight one: " + "; ".join(table), dt)
    assert ok


# ---- 8: three-color flip sequences ----

def test_criterion_8a_flip3():
    t0 = time.time()
    ok, rows = True, []
    for a1 in (16, 25, 36):
        rep = flip3Construction(a1)
        q = math.isqrt(a1 - 1) + 1
        good = rep.flipValid and rep.degrees[2] == (a1 - 2 * q) ** 2 and rep.crossChecks and \
            all(c for _, c in rep.crossChecks)
        ok &= bool(good)
        rows.append("a1=%d degrees %s cross-checked %d factors" % (a1, list(rep.degrees), len(rep.crossChecks)))
    record(8, "a", ok, "; ".join(rows), time.time() - t0)
    assert ok


def test_criterion_8b_cuts_a1_4():
    t0 = time.time()
    a1 = 4
    lo, hi = 5 * a1 * a1 // 4, 2 * a1 * a1
    uncovered = {GOODMAN: [], STATED: []}
    rounds = {GOODMAN: 0, STATED: 0}
    pairs = 0
    for a3 in range(lo + 1, hi + 1):
        for a2 in range(a1 + 1, a3):
            pairs += 1
            for form in (GOODMAN, STATED):
                res = refuteWithCuts(flipSystem([a1, a2, a3]), maxRounds=50, form=form)
                if isinstance(res, Infeasible):
                    rounds[form] = max(rounds[form], res.rounds)
                else:
                    uncovered[form].append((a2, a3))
    ok = not uncovered[GOODMAN] and not uncovered[STATED]
    record(8, "b", ok, "a1=4, a3 in (20, 32]: %d pairs; uncovered %s; max cut rounds %s"
           % (pairs, uncovered, rounds), time.time() - t0)
    assert ok


# ---- 9: gadget rigidity ----

def test_criterion_9a_generator():
    rep = checkRigidity(loadTemplate("dangler_generator"))
    record(9, "a", rep.ok and rep.count == 1, "dangler generator: %d valid flip colorings" % rep.count)
    assert rep.ok and rep.count == 1


def test_criterion_9b_clause():
    rep = checkRigidity(loadTemplate("flip_clause"))
    ok = rep.ok and rep.detail["internalColorings"] == 1
    record(9, "b", ok, "flip clause: internal colorings %d over %d boundary patterns"
           % (rep.detail["internalColorings"], rep.detail["boundaryPatterns"]))
    assert ok


@pytest.mark.xfail(strict=True, reason="no (1,6)/(1,2) variable gadget has a TRUE state; see ledger")
def test_criterion_9c_rc_variable():
    rep = checkRigidity(loadTemplate("rc_variable"))
    record(9, "c", rep.ok, "rc variable: %s" % rep.detail)
    assert rep.ok


# ---- 10: end to end ----

@pytest.fixture(scope="module")
def rc_red():
    return buildRcReduction(repeated_clause_instance())


def test_criterion_10a_rc_regular(rc_red):
    prof = checkTriangleRegular(rc_red.graph())
    ok = prof.uniform and tuple(prof.r) == (7,) and tuple(prof.c) == (3,)
    record(10, "a", ok, "rc reduction: %d vertices, profile %s" % (rc_red.n, prof))
    assert ok


@pytest.mark.xfail(strict=True, reason="counting argument rules out every coloring of this shape; see ledger")
def test_criterion_10b_rc_forward(rc_red):
    results = [verifyColoring(rc_red, assignmentToColoring(rc_red, a)).ok
               for a in bruteForceSat(rc_red.formula, ONE_IN_THREE)]
    record(10, "b", all(results), "rc forward: %d of %d one-in-three assignments verify"
           % (sum(results), len(results)))
    assert all(results) and len(results) == 3


@pytest.mark.slow
def test_criterion_10c_flip_forward():
    t0 = time.time()
    red = buildFlipReduction(repeated_clause_instance())
    results = [checkFlip(red.graph(assignmentToColoring(red, a))).ok for a in bruteForceSat(red.formula, NAE)]
    ok = len(results) == 6 and all(results)
    record(10, "c", ok, "flip forward: %d of %d NAE assignments pass checkFlip (%d vertices)"
           % (sum(results), len(results), red.n), time.time() - t0)
    assert ok


def test_criterion_10d_unsat_fixtures():
    t0 = time.time()
    rows, ok = [], True
    for name, build, mode in (("unsat_nae_e4.pcnf", buildFlipReduction, FlipMode()),
                              ("unsat_1in3_e4.pcnf", buildRcReduction, RcMode())):
        red = build(loadFormula(os.path.join(FIXTURES, name)))
        sk, fixed, verts = gadget_cluster(red)
        res = solveColoring(sk, mode, budget=10 ** 7, fixed=fixed, vertices=verts)
        ok &= isinstance(res, Unsat)
        rows.append("%s: %s after %d nodes" % (name, res.verdict, res.nodes))
    record(10, "d", ok, "; ".join(rows), time.time() - t0)
    assert ok
