"""Achievable (r, c) pairs for abelian Cayley graphs over small groups.

Symmetric sets are enumerated as unions of inverse orbits {x, -x}.  For a
fixed group all sets of a given size are counted in numpy batches against
the group's addition table.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .abelian import AbelianGroup, CapExceeded, SymmetricSet, enumerate_group_types

DEFAULT_ORDER_CAP = 40
BATCH = 2048


@dataclass(frozen=True, order=True)
class SpectrumRecord:
    r: int
    c: int
    witnessGroup: tuple
    witnessSet: tuple  # sorted residue tuples

    @property
    def x(self):
        """Nearest multiple index: round(2 (C(r,2) - c) / r), halves rounded up."""
        q = Fraction(2 * (math.comb(self.r, 2) - self.c), self.r)
        return math.floor(q + Fraction(1, 2))

    @property
    def y(self):
        return self.c - (math.comb(self.r, 2) - Fraction(self.r * self.x, 2))

    def symmetric_set(self):
        return SymmetricSet(AbelianGroup(self.witnessGroup), self.witnessSet)


def inverse_orbits(g: AbelianGroup):
    """Orbits {x, -x} of nonzero elements as index tuples, in index order."""
    neg = g.neg_index
    seen = set()
    out = []
    for i in range(1, g.order):
        if i in seen:
            continue
        j = int(neg[i])
        orb = (i,) if i == j else (i, j)
        seen.update(orb)
        out.append(orb)
    return out


def enumerateSymmetricSets(G: AbelianGroup, cap=DEFAULT_ORDER_CAP):
    """Every symmetric subset exactly once (the empty set included)."""
    if G.order > cap:
        raise CapExceeded("group order %d exceeds cap %d" % (G.order, cap))
    orbs = inverse_orbits(G)
    for mask in range(1 << len(orbs)):
        idx = [i for k, o in enumerate(orbs) if mask >> k & 1 for i in o]
        yield SymmetricSet(G, [G.unindex(i) for i in idx])


def sets_of_size(G: AbelianGroup, r):
    """Index lists of the symmetric sets with exactly r elements."""
    orbs = inverse_orbits(G)
    singles = [o for o in orbs if len(o) == 1]
    pairs = [o for o in orbs if len(o) == 2]
    for ns in range(r % 2, min(r, len(singles)) + 1, 2):
        npairs = (r - ns) // 2
        if npairs > len(pairs):
            continue
        for cs in combinations(singles, ns):
            for cp in combinations(pairs, npairs):
                yield sorted([o[0] for o in cs] + [i for o in cp for i in o])


def batch_triple_counts(G: AbelianGroup, index_sets) -> np.ndarray:
    """#{(a, b) in S x S : a + b in S} for each set, one numpy pass per batch."""
    tab = G.add_table
    k = len(index_sets)
    if k == 0:
        return np.zeros(0, dtype=np.int64)
    V = np.zeros((k, G.order), dtype=np.int8)
    for row, idx in enumerate(index_sets):
        V[row, idx] = 1
    r = len(index_sets[0])
    if all(len(s) == r for s in index_sets) and r > 0:
        I = np.array(index_sets, dtype=np.int64)  # (k, r)
        sums = tab[I[:, :, None], I[:, None, :]]  # (k, r, r) indices of a + b
        return np.take_along_axis(V, sums.reshape(k, -1), axis=1).sum(axis=1).astype(np.int64)
    out = np.zeros(k, dtype=np.int64)
    for row, idx in enumerate(index_sets):
        if idx:
            sub = tab[np.ix_(idx, idx)]
            out[row] = int(V[row, sub].sum())
    return out


def _group_spectrum(args):
    """c -> first witness (index list) for one group; runs in a worker."""
    moduli, r = args
    G = AbelianGroup(moduli)
    found = {}
    batch = []

    def flush():
        if not batch:
            return
        counts = batch_triple_counts(G, batch)
        for idx, cnt in zip(batch, counts):
            c = int(cnt) // 2
            if c not in found:
                found[c] = idx
        batch.clear()

    for idx in sets_of_size(G, r):
        batch.append(idx)
        if len(batch) >= BATCH:
            flush()
    flush()
    return moduli, {c: tuple(G.unindex(i) for i in idx) for c, idx in found.items()}


def all_group_types(maxOrder):
    return [m for n in range(2, maxOrder + 1) for m in enumerate_group_types(n)]


def default_threads():
    env = os.environ.get("TRIREG_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def spectrumForR(r, maxGroupOrder, threads=1) -> list:
    """One SpectrumRecord per achieved c, sorted by c.

    Witnesses are the first set found in (order, moduli, enumeration) order,
    so the output does not depend on the number of workers.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    jobs = [(m, r) for m in all_group_types(maxGroupOrder) if math.prod(m) > r]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_group_spectrum, jobs))
    else:
        results = [_group_spectrum(j) for j in jobs]
    best = {}
    for moduli, found in results:  # results keep job order
        for c, members in found.items():
            if c not in best:
                best[c] = SpectrumRecord(r, c, tuple(moduli), tuple(sorted(members)))
    return [best[c] for c in sorted(best)]


def band(r):
    """[C(r,2) - floor((r-2)/2), C(r,2) - 1]; empty when the low end exceeds the high end."""
    top = math.comb(r, 2)
    return top - (r - 2) // 2, top - 1


@dataclass
class BandReport:
    r: int
    maxGroupOrder: int
    band: tuple
    achieved: list
    inBand: list
    tightValue: object  # C(r,2) - r/2 for even r, else None
    tightFound: object
    distances: list  # (c, x, y) for c > C(r,2) - r^(3/2)

    @property
    def ok(self):
        return not self.inBand and (self.tightValue is None or self.tightFound)

    def to_json(self):
        return {"r": self.r, "maxGroupOrder": self.maxGroupOrder, "band": list(self.band),
                "achieved": self.achieved, "inBand": self.inBand,
                "tightValue": self.tightValue, "tightFound": self.tightFound,
                "distances": [{"c": c, "x": x, "y": str(y)} for c, x, y in self.distances],
                "ok": self.ok}


def forbiddenBandCheck(r, maxGroupOrder, threads=1, records=None) -> BandReport:
    """No achieved c may fall in the band; tabulate (x, y) near the top."""
    if r < 2:
        raise ValueError("r must be >= 2")
    records = spectrumForR(r, maxGroupOrder, threads) if records is None else records
    lo, hi = band(r)
    cs = [rec.c for rec in records]
    inband = [c for c in cs if lo <= c <= hi]
    top = math.comb(r, 2)
    tight = top - r // 2 if r % 2 == 0 else None
    near = [(rec.c, rec.x, rec.y) for rec in records if rec.c > top - r ** 1.5]
    return BandReport(r, maxGroupOrder, (lo, hi), cs, inband, tight,
                      None if tight is None else tight in cs, near)


# ---- CSV ----

FIELDS = ["r", "c", "x", "y", "groupModuli", "setMembers"]


def _fmt_members(members):
    return " ".join(".".join(str(a) for a in m) for m in members)


def emitSpectrumCsv(records, path):
    """Columns r,c,x,y,groupModuli,setMembers; rows sorted by (r, c).  `path` may be an open file."""
    if hasattr(path, "write"):
        _write_csv(records, path)
        return
    with open(path, "w", newline="") as fh:
        _write_csv(records, fh)


def _write_csv(records, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(FIELDS)
    for rec in sorted(records):
        w.writerow([rec.r, rec.c, rec.x, str(rec.y), "x".join(str(m) for m in rec.witnessGroup),
                    _fmt_members(rec.witnessSet)])


def readSpectrumCsv(path):
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            moduli = tuple(int(m) for m in row["groupModuli"].split("x"))
            members = tuple(tuple(int(a) for a in m.split(".")) for m in row["setMembers"].split())
            out.append(SpectrumRecord(int(row["r"]), int(row["c"]), moduli, members))
    return out
