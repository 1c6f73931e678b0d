"""Property tests over randomly drawn groups, sets and graphs."""

import math
from fractions import Fraction

from hypothesis import assume, given, settings, strategies as st

from oracles import all_elements, brute_product_edges, brute_profile, brute_subgroups, naive_triples
from trireg.abelian import (AbelianGroup, SymmetricSet, cayleyGraph, enumerate_group_types,
                            is_subgroup, max_imaginary, plancherel_defect, subgroupClosure, tripleCount)
from trireg.constructions import buildCliqueProduct, cliqueProductDecompose, colored_cayley_graph
from trireg.graph import ColoredGraph, cartesianProduct, checkTriangleRegular, triangleProfile
from trireg.lp import GOODMAN, buildSystem, graphDensityVector, refuteWithCuts, supersaturationCheck
from trireg.lp.simplex import Infeasible
from trireg.spectrum import inverse_orbits

TYPES = [m for n in range(2, 17) for m in enumerate_group_types(n)]


@st.composite
def groups(draw, types=TYPES):
    return AbelianGroup(draw(st.sampled_from(types)))


@st.composite
def symmetric_sets(draw, types=TYPES):
    G = draw(groups(types))
    orbs = inverse_orbits(G)
    pick = draw(st.lists(st.booleans(), min_size=len(orbs), max_size=len(orbs)))
    members = [G.unindex(i) for o, p in zip(orbs, pick) if p for i in o]
    return SymmetricSet(G, members)


@st.composite
def colored_cayley(draw, t=3):
    """Colored Cayley graph: each inverse orbit gets a color or is left out."""
    G = draw(groups())
    classes = {}
    for o in inverse_orbits(G):
        c = draw(st.integers(0, t))
        if c:
            classes.setdefault(c, []).extend(G.unindex(i) for i in o)
    classes = {c: v for c, v in classes.items()}
    g = colored_cayley_graph(G, classes)
    g = ColoredGraph(t, g.n, g.edges)
    return g


@st.composite
def small_graphs(draw, t=2, nmax=6):
    n = draw(st.integers(1, nmax))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            c = draw(st.integers(0, t))
            if c:
                edges.append((u, v, c))
    return ColoredGraph(t, n, edges)


# ---- Cayley consistency ----

@settings(max_examples=150, deadline=None)
@given(symmetric_sets())
def test_cayley_profile_matches_triples(S):
    prof = checkTriangleRegular(cayleyGraph(S))
    naive = naive_triples(S.group.moduli, S.members)
    assert prof.uniform
    assert tuple(prof.r) == (len(S),) and tuple(prof.c) == (Fraction(naive, 2),)
    assert tripleCount(S) == naive


@settings(max_examples=60, deadline=None)
@given(colored_cayley())
def test_colored_cayley_profile_matches_brute(g):
    want = brute_profile(g.t, g.n, g.edges)
    got = triangleProfile(g)
    assert all(want[v] == (tuple(got[v].deg), tuple(got[v].nbhdEdges)) for v in range(g.n))
    assert len(set(want.values())) == 1  # vertex-transitive


# ---- products ----

@settings(max_examples=60, deadline=None)
@given(small_graphs(), small_graphs())
def test_product_profile_is_additive(g, h):
    p = cartesianProduct(g, h)
    n, edges = brute_product_edges(g.n, g.edges, h.n, h.edges)
    want = brute_profile(2, n, edges)
    pg, ph = brute_profile(2, g.n, g.edges), brute_profile(2, h.n, h.edges)
    got = triangleProfile(p)
    for a in range(g.n):
        for b in range(h.n):
            v = a * h.n + b
            add = (tuple(x + y for x, y in zip(pg[a][0], ph[b][0])),
                   tuple(x + y for x, y in zip(pg[a][1], ph[b][1])))
            assert want[v] == add
            assert (tuple(got[v].deg), tuple(got[v].nbhdEdges)) == add


# ---- Fourier ----

@settings(max_examples=100, deadline=None)
@given(symmetric_sets())
def test_plancherel_and_real_spectrum(S):
    assert plancherel_defect(S) <= 1e-9
    assert max_imaginary(S) <= 1e-9


# ---- subgroup closure ----

SMALL = [m for n in range(2, 13) for m in enumerate_group_types(n)]
_SUBS = {}


def subgroups_of(moduli):
    if moduli not in _SUBS:
        _SUBS[moduli] = brute_subgroups(moduli)
    return _SUBS[moduli]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_closure_is_minimal(moduli, data):
    G = AbelianGroup(moduli)
    els = all_elements(moduli)
    seed = data.draw(st.lists(st.sampled_from(els), max_size=3))
    H = subgroupClosure(G, seed)
    assert is_subgroup(G, H) and set(seed) <= set(H)
    containing = [K for K in subgroups_of(moduli) if set(seed) <= K]
    assert frozenset(H) == min(containing, key=len)
    assert all(frozenset(H) <= K for K in containing)


# ---- clique products ----

@settings(max_examples=80, deadline=None)
@given(st.integers(1, 14), st.data())
def test_clique_plan_sound(r, data):
    c = data.draw(st.integers(0, math.comb(r, 2)))
    plan = cliqueProductDecompose(r, c)
    if plan is None:
        return
    assert sum(a - 1 for a in plan.cliqueSizes) == r
    assert sum(math.comb(a - 1, 2) for a in plan.cliqueSizes) == c
    S = buildCliqueProduct(plan)
    assert len(S) == r and tripleCount(S) == 2 * c


# ---- density necessity on constructed graphs ----

def necessity(g):
    prof = checkTriangleRegular(g)
    assume(prof.uniform)
    r, c = list(prof.r), [int(x) for x in prof.c]
    x = graphDensityVector(g)
    assert not buildSystem(r, c).check(x.point())
    for i in range(1, g.t + 1):
        assert supersaturationCheck(r, x, i, GOODMAN) >= 0
    return r, c, x


@settings(max_examples=80, deadline=None)
@given(colored_cayley())
def test_density_necessity_cayley(g):
    necessity(g)


@settings(max_examples=25, deadline=None)
@given(colored_cayley(t=2))
def test_cuts_never_refute_realizable(g):
    r, c, x = necessity(g)
    assert not isinstance(refuteWithCuts(buildSystem(r, c), maxRounds=10), Infeasible)


@settings(max_examples=40, deadline=None)
@given(symmetric_sets(), symmetric_sets())
def test_density_necessity_products(S, T):
    g = cayleyGraph(S)
    h = cayleyGraph(T)
    h2 = ColoredGraph(2, h.n, [(u, v, 2) for u, v, _ in h.edges])
    g2 = ColoredGraph(2, g.n, g.edges)
    assume(g.n * h.n <= 256)
    necessity(cartesianProduct(g2, h2))
