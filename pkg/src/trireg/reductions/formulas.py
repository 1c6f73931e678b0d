"""Positive 3-CNF formulas: validation, brute-force solving, DIMACS-like I/O.

Format: `p pcnf <vars> <clauses>` then one clause per line `a b c 0`.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from itertools import product

ONE_IN_THREE = "OneInThreeE4"
NAE = "NaeE4"
VARIANTS = (ONE_IN_THREE, NAE)
BRUTE_FORCE_CAP = 25


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class PositiveCnf:
    varCount: int
    clauses: tuple  # tuples of 1-based variable ids

    def occurrences(self):
        return Counter(v for cl in self.clauses for v in cl)


def formula(varCount, clauses):
    return PositiveCnf(int(varCount), tuple(tuple(int(v) for v in cl) for cl in clauses))


def validateFormula(f: PositiveCnf, variant=ONE_IN_THREE):
    """[] when f is a valid E4 instance, else a list of (kind, detail) violations."""
    if variant not in VARIANTS:
        raise FormulaError("unknown variant %r" % variant)
    bad = []
    for k, cl in enumerate(f.clauses):
        if len(cl) != 3:
            bad.append(("ClauseLength", "clause %d has %d literals" % (k, len(cl))))
        if any(v <= 0 for v in cl):
            bad.append(("Positivity", "clause %d has a non-positive literal" % k))
        if any(v > f.varCount for v in cl):
            bad.append(("VariableRange", "clause %d uses a variable above %d" % (k, f.varCount)))
        if len(set(cl)) != len(cl):
            bad.append(("DistinctVars", "clause %d repeats a variable" % k))
    occ = f.occurrences()
    for v in range(1, f.varCount + 1):
        if occ.get(v, 0) != 4:
            bad.append(("OccurrenceCount", "variable %d occurs %d times" % (v, occ.get(v, 0))))
    return bad


def clause_ok(values, variant):
    k = sum(values)
    if variant == ONE_IN_THREE:
        return k == 1
    return 0 < k < len(values)


def satisfies(f: PositiveCnf, assignment, variant):
    """assignment: sequence of bools indexed by variable - 1."""
    return all(clause_ok([bool(assignment[v - 1]) for v in cl], variant) for cl in f.clauses)


def bruteForceSat(f: PositiveCnf, variant=ONE_IN_THREE):
    """Every satisfying assignment, as tuples of bools, in lexicographic order."""
    if f.varCount > BRUTE_FORCE_CAP:
        raise FormulaError("varCount %d exceeds the brute-force cap %d" % (f.varCount, BRUTE_FORCE_CAP))
    return [a for a in product((False, True), repeat=f.varCount) if satisfies(f, a, variant)]


def repeated_clause_instance():
    """(1,2,3) four times: the smallest E4 instance."""
    return formula(3, [(1, 2, 3)] * 4)


def random_e4(varCount, rng: random.Random, tries=1000):
    """Random positive E4 formula: 4 copies of each variable dealt into clauses of 3 distinct variables."""
    if (4 * varCount) % 3:
        raise FormulaError("4 * varCount must be divisible by 3")
    for _ in range(tries):
        pool = [v for v in range(1, varCount + 1) for _ in range(4)]
        rng.shuffle(pool)
        clauses = [tuple(sorted(pool[i:i + 3])) for i in range(0, len(pool), 3)]
        if all(len(set(c)) == 3 for c in clauses):
            return formula(varCount, clauses)
    raise FormulaError("no E4 formula found in %d tries" % tries)


def find_unsat_e4(variant, varCounts=(6, 9, 12), seed=0, attempts=2000):
    """First randomly generated E4 formula with no satisfying assignment."""
    rng = random.Random(seed)
    for n in varCounts:
        for _ in range(attempts):
            f = random_e4(n, rng)
            if not bruteForceSat(f, variant):
                return f
    return None


def dumps_formula(f: PositiveCnf) -> str:
    lines = ["p pcnf %d %d" % (f.varCount, len(f.clauses))]
    lines += ["%s 0" % " ".join(str(v) for v in cl) for cl in f.clauses]
    return "\n".join(lines) + "\n"


def loads_formula(text: str) -> PositiveCnf:
    header = None
    clauses = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("c "):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "pcnf":
                raise FormulaError("bad header %r" % raw)
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise FormulaError("clause before header")
        nums = [int(x) for x in parts]
        if nums[-1] != 0:
            raise FormulaError("clause line must end with 0: %r" % raw)
        clauses.append(tuple(nums[:-1]))
    if header is None:
        raise FormulaError("missing header")
    if len(clauses) != header[1]:
        raise FormulaError("header says %d clauses, found %d" % (header[1], len(clauses)))
    return formula(header[0], clauses)


def loadFormula(path):
    with open(path) as fh:
        return loads_formula(fh.read())


def saveFormula(f, path):
    with open(path, "w") as fh:
        fh.write(dumps_formula(f))
