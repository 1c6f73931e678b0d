import math

import pytest

from oracles import naive_triples, powerset_symmetric
from trireg.abelian import AbelianGroup, CapExceeded, cayleyGraph
from trireg.graph import checkTriangleRegular
from trireg.spectrum import (SpectrumRecord, band, batch_triple_counts, emitSpectrumCsv,
                             enumerateSymmetricSets, forbiddenBandCheck, readSpectrumCsv, sets_of_size,
                             spectrumForR)


@pytest.mark.parametrize("m, count", [(3, 2), (4, 4), (5, 4)])
def test_enumeration_examples(m, count):
    assert len(list(enumerateSymmetricSets(AbelianGroup([m])))) == count


@pytest.mark.parametrize("n", range(2, 13))
def test_enumeration_count_matches_powerset(n):
    got = {frozenset(S.members) for S in enumerateSymmetricSets(AbelianGroup([n]))}
    want = {frozenset(S) for S in powerset_symmetric([n])}
    assert got == want and len(got) == 2 ** ((n - 1) // 2 + (n % 2 == 0))


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        list(enumerateSymmetricSets(AbelianGroup([41])))


def test_batch_counts_match_naive():
    G = AbelianGroup([2, 6])
    sets = list(sets_of_size(G, 4))
    counts = batch_triple_counts(G, sets)
    for idx, k in zip(sets, counts):
        assert k == naive_triples(G.moduli, [G.unindex(i) for i in idx])


def test_spectrum_r2():
    recs = spectrumForR(2, 12)
    assert [r.c for r in recs] == [0, 1]


def test_spectrum_r4():
    recs = spectrumForR(4, 24)
    assert [r.c for r in recs] == [0, 1, 2, 3, 4, 6]
    four = next(r for r in recs if r.c == 4)
    assert four.witnessGroup == (6,) and set(four.witnessSet) == {(1,), (2,), (4,), (5,)}


def test_records_reverify():
    for rec in spectrumForR(5, 20):
        p = checkTriangleRegular(cayleyGraph(rec.symmetric_set()))
        assert p.uniform and (p.r, p.c) == ((5,), (rec.c,))


def test_monotone_coverage():
    small = {r.c for r in spectrumForR(6, 14)}
    big = {r.c for r in spectrumForR(6, 22)}
    assert small <= big


def test_thread_count_independent():
    assert spectrumForR(4, 16, threads=1) == spectrumForR(4, 16, threads=2)


@pytest.mark.parametrize("r, lo, hi", [(4, 5, 5), (6, 13, 14), (2, 1, 0)])
def test_band(r, lo, hi):
    assert band(r) == (lo, hi)


@pytest.mark.parametrize("r, order", [(4, 24), (6, 28), (2, 12)])
def test_forbidden_band(r, order):
    rep = forbiddenBandCheck(r, order)
    assert rep.inBand == [] and rep.ok


def test_xy_decomposition():
    rec = SpectrumRecord(4, 4, (6,), ((1,), (2,), (4,), (5,)))
    assert rec.x == 1 and rec.y == 0
    for c in range(0, 16):
        rec = SpectrumRecord(6, c, (7,), ())
        assert rec.c == math.comb(6, 2) - 6 * rec.x / 2 + rec.y and abs(rec.y) <= 1.5


def test_csv(tmp_path):
    p = tmp_path / "s.csv"
    emitSpectrumCsv([], p)
    assert p.read_text().strip() == "r,c,x,y,groupModuli,setMembers"
    recs = spectrumForR(2, 12)
    emitSpectrumCsv(recs, p)
    assert len(p.read_text().strip().splitlines()) == 3
    assert readSpectrumCsv(p) == recs
