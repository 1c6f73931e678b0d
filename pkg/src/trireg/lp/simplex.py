"""Exact phase-1 simplex with Bland's rule.

Rows are stored fraction-free: a list of Python ints plus one positive
denominator per row, reduced by the row gcd after every pivot.  Infeasible
systems come with Farkas multipliers read off the phase-1 reduced costs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .system import EQ, LE, RationalLinearSystem


@dataclass
class Feasible:
    witness: dict
    verdict: str = "Feasible"
    basis: tuple = field(default=(), repr=False)

    def to_json(self):
        return {"verdict": self.verdict, "witness": {k: str(v) for k, v in self.witness.items() if v != 0}}


@dataclass
class Infeasible:
    """Row multipliers lam and nonnegativity multipliers mu with lam.A - mu = 0 and lam.b = -1."""
    certificate: dict
    nonneg: dict
    verdict: str = "Infeasible"

    def to_json(self):
        return {"verdict": self.verdict,
                "certificate": {k: str(v) for k, v in self.certificate.items() if v != 0},
                "nonneg": {k: str(v) for k, v in self.nonneg.items() if v != 0}}


@dataclass
class Unknown:
    bestPoint: dict
    verdict: str = "Unknown"
    note: str = ""

    def to_json(self):
        return {"verdict": self.verdict, "note": self.note,
                "bestPoint": {k: str(v) for k, v in self.bestPoint.items() if v != 0}}


def _lcm_den(vals):
    d = 1
    for v in vals:
        d = math.lcm(d, Fraction(v).denominator)
    return d


def _normalize(row, den):
    g = math.gcd(*row, den) if row else den
    if g > 1:
        row = [a // g for a in row]
        den //= g
    return row, den


class _Tableau:
    def __init__(self, A, rels, b):
        m = len(A)
        n = len(A[0]) if A else 0
        self.m, self.n = m, n
        self.sign = []
        self.scale = []
        self.unit_col = []
        self.art = set()
        ncols = n + sum(1 for r in rels if r == LE)
        slack_next = n
        slack_of_row = []
        for i in range(m):
            if rels[i] == LE:
                slack_of_row.append(slack_next)
                slack_next += 1
            else:
                slack_of_row.append(None)
        rows = []
        self.basis = []
        for i in range(m):
            sc = _lcm_den(list(A[i]) + [b[i]])
            ints = [int(a * sc) for a in A[i]]
            rhs = int(b[i] * sc)
            s = 1 if rhs >= 0 else -1
            self.sign.append(s)
            self.scale.append(sc)
            full = [0] * ncols
            for j, a in enumerate(ints):
                full[j] = s * a
            if slack_of_row[i] is not None:
                full[slack_of_row[i]] = s * sc
            rows.append((full, s * rhs))
        # each row starts with a unit column: its slack when the sign allows, else an artificial
        total = ncols + m
        self.rows = []
        self.den = []
        for i, (full, rhs) in enumerate(rows):
            full = full + [0] * m + [rhs]
            sl = slack_of_row[i]
            if sl is not None and full[sl] > 0:
                self.basis.append(sl)
                self.unit_col.append(sl)
                self.rows.append(full)
                self.den.append(full[sl])
            else:
                a = ncols + i
                full[a] = 1
                self.art.add(a)
                self.basis.append(a)
                self.unit_col.append(a)
                self.rows.append(full)
                self.den.append(1)
        for i in range(m):
            self.rows[i], self.den[i] = _normalize(self.rows[i], self.den[i])
        self.ncols = total
        # phase-1 objective: minimize the sum of artificials; store reduced costs
        obj = [0] * (total + 1)
        oden = 1
        for a in self.art:
            obj[a] = 1
        for i in range(m):
            if self.basis[i] in self.art:
                # subtract row i (true values rows[i]/den[i]) from the objective
                d = self.den[i]
                obj = [o * d - oden * r for o, r in zip(obj, self.rows[i])]
                oden *= d
                obj, oden = _normalize(obj, oden)
        self.obj, self.oden = obj, oden

    def pivot(self, p, q):
        Rp = self.rows[p]
        piv = Rp[q]
        if piv < 0:
            Rp = [-a for a in Rp]
            piv = -piv
        self.rows[p], self.den[p] = _normalize(Rp, piv)
        Rp, dp = self.rows[p], self.den[p]
        for i in range(self.m):
            if i == p:
                continue
            Ri = self.rows[i]
            f = Ri[q]
            if f == 0:
                continue
            # Ri/di - (f/di) * Rp/dp
            new = [a * dp - f * b for a, b in zip(Ri, Rp)]
            self.rows[i], self.den[i] = _normalize(new, self.den[i] * dp)
        f = self.obj[q]
        if f:
            new = [a * dp - f * b for a, b in zip(self.obj, Rp)]
            self.obj, self.oden = _normalize(new, self.oden * dp)
        self.basis[p] = q

    def run(self, max_pivots=100000):
        """Bland's rule; returns the number of pivots."""
        piv = 0
        rhs = self.ncols
        while True:
            q = None
            for j in range(self.ncols):
                if j in self.art and j not in self.basis:
                    continue
                if self.obj[j] < 0:
                    q = j
                    break
            if q is None:
                return piv
            best = None
            for i in range(self.m):
                a = self.rows[i][q]
                if a > 0:
                    # ratio rhs_i / a_iq, compared by cross-multiplying
                    num = self.rows[i][rhs]
                    if best is None:
                        best = (i, num, a)
                    else:
                        _, bn, ba = best
                        lhs, rhs_ = num * ba, bn * a
                        if lhs < rhs_ or (lhs == rhs_ and self.basis[i] < self.basis[best[0]]):
                            best = (i, num, a)
            if best is None:
                raise RuntimeError("phase-1 objective unbounded")
            self.pivot(best[0], q)
            piv += 1
            if piv > max_pivots:
                raise RuntimeError("pivot limit exceeded")

    def objective_value(self):
        # stored row holds -w, so w = -rhs/oden
        return Fraction(-self.obj[self.ncols], self.oden)

    def basic_values(self):
        return {j: Fraction(self.rows[i][self.ncols], self.rows[i][j])
                for i, j in enumerate(self.basis)}

    def duals(self):
        """Row multipliers pi_i = cost - reduced cost of the initial unit column of row i."""
        out = []
        for i in range(self.m):
            col = self.unit_col[i]
            cost = 1 if col in self.art else 0
            out.append(cost - Fraction(self.obj[col], self.oden))
        return out

    def row_factor(self, i):
        """Tableau row i started as this multiple of original row i."""
        if self.unit_col[i] in self.art:
            return self.sign[i] * self.scale[i]
        return 1


def solveFeasibility(sys_: RationalLinearSystem):
    """Feasible(witness) or Infeasible(certificate); never Unknown for linear systems."""
    A, rels, b = sys_.matrix()
    names = sys_.variables
    if not A:
        return Feasible({v: Fraction(0) for v in names})
    tab = _Tableau(A, rels, b)
    tab.run()
    w = tab.objective_value()
    if w == 0:
        vals = tab.basic_values()
        witness = {v: vals.get(j, Fraction(0)) for j, v in enumerate(names)}
        bad = sys_.check(witness)
        if bad:
            raise AssertionError("simplex witness fails constraints: %s" % bad)
        return Feasible(witness, basis=tuple(tab.basis))
    pi = tab.duals()
    lam = [-pi[i] * tab.row_factor(i) for i in range(tab.m)]
    norm = sum(l * bi for l, bi in zip(lam, b))
    if norm >= 0:
        raise AssertionError("phase-1 duals do not give a Farkas certificate")
    lam = [l / -norm for l in lam]
    cert = {_row_label(sys_, i): lam[i] for i in range(len(lam))}
    mu = [sum(lam[i] * A[i][j] for i in range(len(A))) for j in range(len(names))]
    res = Infeasible(cert, {v: mu[j] for j, v in enumerate(names)})
    if not verifyCertificate(sys_, res):
        raise AssertionError("Farkas certificate failed exact verification")
    return res


def _row_label(sys_, i):
    c = sys_.constraints[i]
    return c.label or "row%d" % i


def verifyCertificate(sys_: RationalLinearSystem, res: Infeasible) -> bool:
    """lam_i >= 0 on <= rows, mu >= 0, lam.A = mu and lam.b = -1, all exact."""
    A, rels, b = sys_.matrix()
    lam = [Fraction(res.certificate.get(_row_label(sys_, i), 0)) for i in range(len(A))]
    for i, rel in enumerate(rels):
        if rel == LE and lam[i] < 0:
            return False
    for j, v in enumerate(sys_.variables):
        mu = sum(lam[i] * A[i][j] for i in range(len(A)))
        if mu < 0 or mu != Fraction(res.nonneg.get(v, 0)):
            return False
    return sum(l * bi for l, bi in zip(lam, b)) == -1


def verifyWitness(sys_: RationalLinearSystem, res: Feasible) -> bool:
    return not sys_.check(res.witness)


def check_multipliers(A, rels, b, lam):
    """Scaled check for a cached certificate against a new right-hand side."""
    for i, rel in enumerate(rels):
        if rel == LE and lam[i] < 0:
            return False
    for j in range(len(A[0]) if A else 0):
        if sum(lam[i] * A[i][j] for i in range(len(A))) < 0:
            return False
    return sum(l * bi for l, bi in zip(lam, b)) < 0
