"""Bounded scans of fixed-degree flip systems.

With r fixed the flip system is linear in (x, c).  Its constraint matrix does
not depend on r, only the right-hand side does, so a Farkas certificate found
for one r refutes every other r whose right-hand side it also makes negative.
The scan keeps those certificates and only calls the simplex on a miss.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .cuts import GOODMAN, refuteWithCuts
from .simplex import Feasible, Infeasible, solveFeasibility
from .system import flipSystem


@dataclass
class ScanRow:
    r: tuple
    verdict: str
    source: str  # "cache", "simplex", "cuts" or "construction"
    certificate: dict = None
    witness: dict = None
    scale: int = 1  # cached certificates are stored once and divided by this on output

    def exact_certificate(self):
        """Multipliers normalized so they combine this row's right-hand side to -1."""
        if self.certificate is None:
            return None
        return {k: Fraction(v) / self.scale for k, v in self.certificate.items()}

    def to_json(self):
        out = {"r": list(self.r), "verdict": self.verdict, "source": self.source}
        if self.certificate:
            out["certificate"] = {k: str(v) for k, v in self.exact_certificate().items() if v != 0}
        if self.witness:
            out["witness"] = {k: str(v) for k, v in self.witness.items() if v != 0}
        return out


@dataclass
class ScanReport:
    t: int
    r1Max: int
    rtMax: int
    cuts: bool
    rows: list = field(default_factory=list)
    seconds: float = 0.0
    certificates: int = 0

    def counts(self):
        out = {}
        for row in self.rows:
            out[row.verdict] = out.get(row.verdict, 0) + 1
        return out

    def feasible_rows(self):
        return [row for row in self.rows if row.verdict != "Infeasible"]

    def all_infeasible(self):
        return all(row.verdict == "Infeasible" for row in self.rows)

    def to_json(self, rows=False):
        out = {"t": self.t, "r1Max": self.r1Max, "rtMax": self.rtMax, "cuts": self.cuts,
               "count": len(self.rows), "verdicts": self.counts(),
               "distinctCertificates": self.certificates, "seconds": round(self.seconds, 3),
               "notInfeasible": [row.to_json() for row in self.feasible_rows()]}
        if rows:
            out["rows"] = [row.to_json() for row in self.rows]
        return out


def degree_vectors(t, r1Max, rtMax, r1Min=0):
    """Strictly increasing integer r with r1Min <= r[1] <= r1Max and r[t] <= rtMax."""
    for r1 in range(r1Min, r1Max + 1):
        if t == 1:
            if r1 <= rtMax:
                yield (r1,)
            continue
        for rest in combinations(range(r1 + 1, rtMax + 1), t - 1):
            yield (r1,) + rest


class CertificateCache:
    """Multipliers already known to be valid for the fixed-r flip matrix of t colors."""

    def __init__(self, t):
        self.t = t
        self.items = []  # (integer-scaled multipliers, original certificate)

    def lookup(self, b):
        """(integer multipliers, -lam.b) for the first cached certificate refuting b, else None.

        b maps row labels to right-hand sides (see flip_rhs).
        """
        for lam in self.items:
            if any(k not in b for k in lam):
                continue
            val = sum(l * b[k] for k, l in lam.items())
            if val < 0:
                return lam, -val
        return None

    def add(self, cert):
        # scale to integers so lookups avoid Fraction arithmetic
        den = 1
        for v in cert.values():
            den = math.lcm(den, Fraction(v).denominator)
        lam = {k: int(Fraction(v) * den) for k, v in cert.items() if v != 0}
        self.items.append(lam)


def flip_rhs(r):
    """Right-hand sides of flipSystem(r) by row label, without building the system."""
    t = len(r)
    b = {}
    for i, j in combinations(range(1, t + 1), 2):
        b["cross[%d,%d]" % (i, j)] = r[i - 1] * r[j - 1]
    for i in range(1, t + 1):
        b["inner[%d]" % i] = r[i - 1] * (r[i - 1] - 1) // 2
        b["count[%d]" % i] = 0
    for i in range(1, t):
        b["flip[%d,%d]" % (i, i + 1)] = r[i - 1] - r[i] - 1
    return b


def flipBoundedScan(t, r1Max, rtMax, cuts=False, maxRounds=50, r1Min=0, form=GOODMAN) -> ScanReport:
    """Verdict for every strictly increasing r in the box, with certificate reuse.

    A cached certificate is only reused after the cache confirms that its
    combination of the new right-hand side is negative; the multipliers'
    sign and lam.A >= 0 conditions do not depend on r.
    """
    t0 = time.time()
    rep = ScanReport(t, r1Max, rtMax, cuts)
    cache = CertificateCache(t)
    for r in degree_vectors(t, r1Max, rtMax, r1Min):
        hit = cache.lookup(flip_rhs(r))
        if hit is not None:
            rep.rows.append(ScanRow(r, "Infeasible", "cache", certificate=hit[0], scale=hit[1]))
            continue
        sys_ = flipSystem(r)
        res = refuteWithCuts(sys_, maxRounds=maxRounds, form=form) if cuts else solveFeasibility(sys_)
        if isinstance(res, Infeasible):
            src = "cuts" if cuts and getattr(res, "rounds", 0) > 0 else "simplex"
            if src == "simplex":
                cache.add(res.certificate)
            rep.rows.append(ScanRow(r, "Infeasible", src, certificate=res.certificate))
        elif isinstance(res, Feasible):
            rep.rows.append(ScanRow(r, "Feasible", "cuts" if cuts else "simplex", witness=res.witness))
        else:
            rep.rows.append(ScanRow(r, res.verdict, "cuts", witness=res.bestPoint))
    rep.certificates = len(cache.items)
    rep.seconds = time.time() - t0
    return rep
