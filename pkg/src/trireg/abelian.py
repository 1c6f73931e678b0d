"""Finite abelian groups Z_m1 x ... x Z_mk, symmetric sets, Cayley graphs and
the approximate-subgroup procedure.

Elements are residue tuples.  Internally they are also encoded as mixed-radix
indices (last coordinate fastest), which is the C order numpy uses for an
array of shape `moduli`.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np

from .graph import ColoredGraph

FLOAT_TOL = 1e-9
BITSET_MAX_ORDER = 1 << 18


class GroupError(ValueError):
    pass


class CapExceeded(GroupError):
    pass


class AbelianGroup:
    def __init__(self, moduli):
        moduli = tuple(int(m) for m in moduli)
        if not moduli or any(m < 2 for m in moduli):
            raise GroupError("moduli must be integers >= 2, got %r" % (moduli,))
        self.moduli = moduli

    def __repr__(self):
        return "AbelianGroup(%s)" % (list(self.moduli),)

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.moduli == other.moduli

    def __hash__(self):
        return hash(self.moduli)

    @property
    def rank(self):
        return len(self.moduli)

    @cached_property
    def order(self):
        return math.prod(self.moduli)

    @cached_property
    def strides(self):
        s = [1] * self.rank
        for j in range(self.rank - 2, -1, -1):
            s[j] = s[j + 1] * self.moduli[j + 1]
        return tuple(s)

    @property
    def zero(self):
        return (0,) * self.rank

    def element(self, x):
        if isinstance(x, int):
            x = (x,)
        x = tuple(int(a) for a in x)
        if len(x) != self.rank:
            raise GroupError("element %r has wrong length for %r" % (x, self))
        return tuple(a % m for a, m in zip(x, self.moduli))

    def add(self, x, y):
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def neg(self, x):
        return tuple((-a) % m for a, m in zip(x, self.moduli))

    def index(self, x):
        return sum(a * s for a, s in zip(x, self.strides))

    def unindex(self, i):
        out = []
        for s, m in zip(self.strides, self.moduli):
            out.append((i // s) % m)
        return tuple(out)

    def elements(self):
        return [tuple(x) for x in product(*[range(m) for m in self.moduli])]

    @cached_property
    def add_table(self):
        """Index addition table, shape (order, order)."""
        coords = np.array(self.elements(), dtype=np.int64).reshape(self.order, self.rank)
        mod = np.array(self.moduli, dtype=np.int64)
        strides = np.array(self.strides, dtype=np.int64)
        tab = np.empty((self.order, self.order), dtype=np.int64)
        for i in range(self.order):
            tab[i] = ((coords + coords[i]) % mod) @ strides
        return tab

    @cached_property
    def neg_index(self):
        coords = np.array(self.elements(), dtype=np.int64).reshape(self.order, self.rank)
        mod = np.array(self.moduli, dtype=np.int64)
        return ((-coords) % mod) @ np.array(self.strides, dtype=np.int64)

    @staticmethod
    def parse_moduli(text):
        return AbelianGroup([int(x) for x in str(text).replace(" ", "").split(",") if x])


class SymmetricSet:
    def __init__(self, group: AbelianGroup, members):
        self.group = group
        ms = frozenset(group.element(x) for x in members)
        if group.zero in ms:
            raise GroupError("0 is not allowed in a symmetric set")
        for x in ms:
            if group.neg(x) not in ms:
                raise GroupError("set is not symmetric: %r in S but %r is not" % (x, group.neg(x)))
        self.members = ms

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, x):
        return x in self.members

    def __repr__(self):
        return "SymmetricSet(%r, %d members)" % (self.group, len(self.members))

    def sorted_members(self):
        return sorted(self.members)

    @cached_property
    def indices(self):
        return sorted(self.group.index(x) for x in self.members)

    @cached_property
    def mask(self):
        m = 0
        for i in self.indices:
            m |= 1 << i
        return m


def enumerate_group_types(n):
    """Invariant-factor moduli (m1 | m2 | ... | mk, product n) of every abelian group of order n."""
    out = []

    def rec(rest, prev, acc):
        if rest == 1:
            out.append(tuple(acc))
            return
        for d in range(max(2, prev), rest + 1):
            if d % prev == 0 and rest % d == 0 and (rest // d == 1 or (rest // d) % d == 0):
                rec(rest // d, d, acc + [d])

    if n >= 2:
        rec(n, 1, [])
    return sorted(out)


def symmetric_set(moduli, members):
    g = AbelianGroup(moduli)
    return SymmetricSet(g, members)


# ---- triple counting ----

class _Translator:
    """Translate bit-packed subsets of G by group elements.

    A shift by k in coordinate j moves elements with x_j < m_j - k up by
    k * stride_j and wraps the rest down by (m_j - k) * stride_j.
    """

    def __init__(self, group: AbelianGroup):
        self.group = group
        self.low = {}
        n = group.order
        for j, (m, s) in enumerate(zip(group.moduli, group.strides)):
            block = m * s
            # repeat one block pattern n // block times
            rep = ((1 << n) - 1) // ((1 << block) - 1)
            for k in range(1, m):
                self.low[(j, k)] = ((1 << ((m - k) * s)) - 1) * rep
        self.full = (1 << n) - 1

    def shift(self, bits, x):
        g = self.group
        for j, k in enumerate(x):
            if k == 0:
                continue
            s = g.strides[j]
            m = g.moduli[j]
            low = self.low[(j, k)]
            bits = ((bits & low) << (k * s)) | ((bits & ~low & self.full) >> ((m - k) * s))
        return bits


_translators = {}


def _translator(group):
    tr = _translators.get(group.moduli)
    if tr is None:
        tr = _Translator(group)
        if len(_translators) > 64:
            _translators.clear()
        _translators[group.moduli] = tr
    return tr


def count_triples_bitset(S: SymmetricSet) -> int:
    """Sum over s in S of |(S + s) & S| using big-int row translation."""
    tr = _translator(S.group)
    M = S.mask
    return sum((tr.shift(M, s) & M).bit_count() for s in S.members)


def count_triples_rows(S: SymmetricSet) -> int:
    """Row-wise numpy counting for groups too large to index."""
    g = S.group
    if not S.members:
        return 0
    dtype = np.int64
    mod = np.array(g.moduli, dtype=dtype)
    A = np.array(sorted(S.members), dtype=dtype).reshape(len(S), g.rank)
    small = np.uint16 if max(g.moduli) < 1 << 16 else np.int64
    member = {row.tobytes() for row in A.astype(small)}
    total = 0
    for a in A:
        sums = ((A + a) % mod).astype(small)
        total += sum(1 for row in sums if row.tobytes() in member)
    return total


def count_triples_naive(S: SymmetricSet) -> int:
    g = S.group
    return sum(1 for a in S.members for b in S.members if g.add(a, b) in S.members)


def tripleCount(S: SymmetricSet) -> int:
    if S.group.order <= BITSET_MAX_ORDER:
        return count_triples_bitset(S)
    return count_triples_rows(S)


def additiveTriples(S: SymmetricSet):
    """(#{(a, b) in S x S : a + b in S}, 1 - count / |S|^2)."""
    k = tripleCount(S)
    if len(S) == 0:
        return k, Fraction(0)
    return k, 1 - Fraction(k, len(S) ** 2)


def cayleyGraph(S: SymmetricSet) -> ColoredGraph:
    g = S.group
    tab = g.add_table
    edges = set()
    for s in S.indices:
        col = tab[:, s]
        for x in range(g.order):
            y = int(col[x])
            edges.add((x, y) if x < y else (y, x))
    return ColoredGraph(1, g.order, [(u, v, 1) for u, v in edges])


# ---- characters ----

def dft_array(S: SymmetricSet) -> np.ndarray:
    """Complex array of 1_S^(chi_t) = sum_x 1_S(x) exp(2 pi i t.x / m), indexed by t."""
    g = S.group
    ind = np.zeros(g.moduli, dtype=float)
    for x in S.members:
        ind[x] = 1.0
    # numpy uses exp(-2 pi i ...); the conjugate gives the + convention
    return np.conj(np.fft.fftn(ind))


def dftIndicator(S: SymmetricSet, tol: float = FLOAT_TOL) -> dict:
    """Map character index -> real Fourier coefficient."""
    F = dft_array(S)
    imag = float(np.max(np.abs(F.imag))) if F.size else 0.0
    if imag > tol * max(1, len(S)):
        raise GroupError("imaginary part %.3g exceeds tolerance" % imag)
    g = S.group
    flat = F.real.reshape(-1)
    return {g.unindex(i): float(flat[i]) for i in range(g.order)}


def plancherel_defect(S: SymmetricSet) -> float:
    """|mean_chi 1_S^(chi)^2 - |S||."""
    F = dft_array(S)
    return abs(float(np.mean(np.abs(F) ** 2)) - len(S))


def max_imaginary(S: SymmetricSet) -> float:
    return float(np.max(np.abs(dft_array(S).imag)))


def maxNontrivialCoefficient(S: SymmetricSet, tol: float = FLOAT_TOL):
    """(index, value) maximizing the coefficient over nontrivial characters; ties go to the smallest index."""
    g = S.group
    flat = dft_array(S).real.reshape(-1)
    best = None
    for i in range(1, g.order):
        if best is None or flat[i] > flat[best] + tol:
            best = i
    return g.unindex(best), float(flat[best])


def character_value(group: AbelianGroup, t, x) -> complex:
    phase = phase_fraction(group, t, x)
    return complex(math.cos(2 * math.pi * phase), math.sin(2 * math.pi * phase))


def phase_fraction(group: AbelianGroup, t, x) -> Fraction:
    """Exact phase of chi_t(x) as a fraction of a full turn, in [-1/2, 1/2)."""
    L = math.lcm(*group.moduli)
    num = sum(a * b * (L // m) for a, b, m in zip(t, x, group.moduli)) % L
    f = Fraction(num, L)
    return f - 1 if f >= Fraction(1, 2) else f


def characterPhaseHistogram(S: SymmetricSet, chi) -> list:
    """Sorted list of angles theta_x in [-pi, pi) over x in S."""
    g = S.group
    chi = g.element(chi)
    return sorted(2 * math.pi * float(phase_fraction(g, chi, x)) for x in S.members)


def phase_histogram_exact(S: SymmetricSet, chi) -> list:
    g = S.group
    chi = g.element(chi)
    return sorted(phase_fraction(g, chi, x) for x in S.members)


def fraction_within(angles, theta: float) -> float:
    """Fraction of angles with |angle| <= theta."""
    if not angles:
        return 0.0
    return sum(1 for a in angles if abs(a) <= theta + FLOAT_TOL) / len(angles)


def positive_real_count(S: SymmetricSet, chi) -> int:
    """Number of x in S with Re chi(x) > 0, decided exactly from the phase."""
    g = S.group
    chi = g.element(chi)
    return sum(1 for x in S.members if abs(phase_fraction(g, chi, x)) < Fraction(1, 4))


# ---- approximate subgroups ----

def hit_counts(S: SymmetricSet) -> dict:
    """x -> #{y in S : x + y in S}."""
    g = S.group
    if g.order <= BITSET_MAX_ORDER:
        tr = _translator(g)
        M = S.mask
        return {x: (tr.shift(M, x) & M).bit_count() for x in S.members}
    return {x: sum(1 for y in S.members if g.add(x, y) in S.members) for x in S.members}


def goodElements(S: SymmetricSet, threshold=Fraction(1, 2), strict: bool = True) -> set:
    """Elements x with Pr_y[x + y in S] above (strict) or at least (non-strict) the threshold."""
    threshold = Fraction(threshold)
    if not 0 < threshold < 1:
        raise GroupError("threshold must lie in (0, 1)")
    n = len(S)
    out = set()
    for x, k in hit_counts(S).items():
        lhs = k * threshold.denominator
        rhs = threshold.numerator * n
        if lhs > rhs or (not strict and lhs == rhs):
            out.add(x)
    return out


def superGoodElements(S: SymmetricSet, threshold=Fraction(2, 3)) -> set:
    return goodElements(S, threshold, strict=False)


def subgroupClosure(G: AbelianGroup, seed) -> frozenset:
    seed = [G.element(x) for x in seed]
    H = {G.zero}
    frontier = deque([G.zero])
    gens = set(seed) | {G.neg(x) for x in seed}
    while frontier:
        h = frontier.popleft()
        for s in gens:
            y = G.add(h, s)
            if y not in H:
                H.add(y)
                frontier.append(y)
    return frozenset(H)


@dataclass(frozen=True)
class SubgroupApproximation:
    subgroup: frozenset
    epsilon: Fraction
    sizeRatio: Fraction
    overlapRatio: Fraction
    superGoodCount: int

    @property
    def size(self):
        return len(self.subgroup)

    def empirical_constant(self):
        """Smallest K with |H & S| >= (1 - K eps)|S| and |H| <= (1 + K eps)|S|; None if eps = 0 and no K works."""
        need = max(Fraction(0), 1 - self.overlapRatio, self.sizeRatio - 1)
        if need == 0:
            return Fraction(0)
        if self.epsilon == 0:
            return None
        return need / self.epsilon


def approxSubgroup(S: SymmetricSet, threshold=Fraction(2, 3)) -> SubgroupApproximation:
    if len(S) == 0:
        raise GroupError("approxSubgroup needs a nonempty set")
    _, eps = additiveTriples(S)
    sg = superGoodElements(S, threshold)
    H = subgroupClosure(S.group, sg)
    n = len(S)
    overlap = sum(1 for x in S.members if x in H)
    return SubgroupApproximation(H, eps, Fraction(len(H), n), Fraction(overlap, n), len(sg))


def is_subgroup(G: AbelianGroup, H) -> bool:
    H = set(H)
    if G.zero not in H:
        return False
    return all(G.add(a, b) in H for a in H for b in H)


def enumerateSubgroups(G: AbelianGroup, cap: int = 256) -> list:
    """All subgroups, each a frozenset, found by adjoining one element at a time."""
    if G.order > cap:
        raise CapExceeded("group order %d exceeds cap %d" % (G.order, cap))
    elems = G.elements()
    start = frozenset([G.zero])
    seen = {start}
    queue = deque([start])
    while queue:
        H = queue.popleft()
        for x in elems:
            if x in H:
                continue
            K = _extend(G, H, x)
            if K not in seen:
                seen.add(K)
                queue.append(K)
    return sorted(seen, key=lambda h: (len(h), sorted(h)))


def _extend(G, H, x):
    """H + <x>."""
    out = set(H)
    cur = x
    while cur not in H:
        out |= {G.add(h, cur) for h in H}
        cur = G.add(cur, x)
    return frozenset(out)


# ---- text format ----

def dumps_set(S: SymmetricSet) -> str:
    g = S.group
    lines = ["group " + " ".join(str(m) for m in g.moduli), "set %d" % len(S)]
    lines += [" ".join(str(a) for a in x) for x in S.sorted_members()]
    return "\n".join(lines) + "\n"


def loads_set(text: str, group: AbelianGroup = None) -> SymmetricSet:
    lines = [l.split("#", 1)[0].strip() for l in text.splitlines()]
    lines = [l for l in lines if l]
    if not lines or not lines[0].startswith("group"):
        raise GroupError("set file must start with 'group <m1> <m2> ...'")
    g = AbelianGroup([int(x) for x in lines[0].split()[1:]])
    if group is not None and group != g:
        raise GroupError("file group %r differs from requested %r" % (g, group))
    if len(lines) < 2 or not lines[1].startswith("set"):
        raise GroupError("second line must be 'set <k>'")
    k = int(lines[1].split()[1])
    rows = lines[2:]
    if len(rows) != k:
        raise GroupError("set declares %d members, found %d" % (k, len(rows)))
    return SymmetricSet(g, [tuple(int(a) for a in r.split()) for r in rows])


def loadSet(path, group=None):
    with open(path) as fh:
        return loads_set(fh.read(), group)


def saveSet(S, path):
    with open(path, "w") as fh:
        fh.write(dumps_set(S))
