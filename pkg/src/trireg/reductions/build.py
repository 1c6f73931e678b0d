"""Reduction builders, forward colorings, decoders and structural checks.

rc: positive 1-in-3-SAT-E4 -> (7,3)-triangle-regular graph; the question is a
coloring with red degree 1 and one red neighborhood edge at every vertex.
flip: positive NAE-3-SAT-E4 -> graph; the question is a 2-color flip coloring.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..graph import ColoredGraph, checkFlip, triangleProfile
from .formulas import NAE, ONE_IN_THREE, PositiveCnf, satisfies, validateFormula
from .gadgets import (BLUE, RED, RC_M, flip_aux, loadTemplate, octahedron, rc_variable,
                      variable_cycle_edges)
from .solver import FlipMode, RcMode, Skeleton, _key

RC_COPIES = 32
FLIP_COPIES = 16
CLAUSE_REPEAT = 3  # each clause repeated so every variable meets 12 = RC_M clause slots


class ReductionError(ValueError):
    pass


@dataclass
class ReductionOutput:
    variant: str  # "rc" or "flip"
    formula: PositiveCnf
    n: int
    edges: list
    variableMap: dict  # (copy, var) -> gadget vertex map
    clauseMap: dict  # (copy, clause) -> gadget vertex map
    copyCount: int
    pairingLedger: list  # (u, v, note)
    coreSize: int
    meta: dict = field(default_factory=dict)

    @property
    def t(self):
        return 2

    def graph(self, colors=None) -> ColoredGraph:
        """Monochrome (t=1) graph, or the t=2 coloring given by `colors`."""
        if colors is None:
            return ColoredGraph(1, self.n, [(u, v, 1) for u, v in self.edges])
        return ColoredGraph(2, self.n, [(u, v, colors[(u, v)]) for u, v in self.edges])

    def skeleton(self):
        return Skeleton(self.n, self.edges)

    def mode(self):
        return RcMode() if self.variant == "rc" else FlipMode()

    def summary(self):
        return {"variant": self.variant, "vertices": self.n, "edges": len(self.edges),
                "copies": self.copyCount, "coreVertices": self.coreSize,
                "pairingEdges": len(self.pairingLedger), **self.meta}


class _Builder:
    def __init__(self):
        self.n = 0
        self.edges = set()

    def vertex(self):
        self.n += 1
        return self.n - 1

    def edge(self, u, v):
        e = _key(u, v)
        if u == v or e in self.edges:
            raise ReductionError("duplicate or loop edge %s" % (e,))
        self.edges.add(e)
        return e


def _check_formula(f, variant):
    bad = validateFormula(f, variant)
    if bad:
        raise ReductionError("formula rejected: %s" % "; ".join(d for _, d in bad))


def _occurrences(clauses):
    """For each clause, the occurrence index of each of its variables."""
    seen = {}
    out = []
    for cl in clauses:
        row = []
        for v in cl:
            row.append(seen.get(v, 0))
            seen[v] = seen.get(v, 0) + 1
        out.append(row)
    return out


# ---- rc reduction ----

def buildRcReduction(f: PositiveCnf, copies=RC_COPIES, template=None) -> ReductionOutput:
    """Variable gadgets glued through merged attachments, one dangler per clause vertex.

    Clauses are repeated CLAUSE_REPEAT times so every variable fills all
    attachments of its gadget.  Copy a of the first half pairs each clause
    dangler with the same clause vertex in copy a + copies/2.
    """
    _check_formula(f, ONE_IN_THREE)
    if copies % 2:
        raise ReductionError("copy count must be even")
    tmpl = template or loadTemplate("rc_variable")
    if tmpl.dangling or len(tmpl.attach) != CLAUSE_REPEAT * 4:
        raise ReductionError("rc variable template must have 12 attachments and no danglers")
    clauses = [cl for cl in f.clauses for _ in range(CLAUSE_REPEAT)]
    occ = _occurrences(clauses)
    b = _Builder()
    vmap, cmap = {}, {}
    inner = [v for v in range(tmpl.n) if v not in set(tmpl.attach)]
    for a in range(copies):
        for var in range(1, f.varCount + 1):
            vmap[(a, var)] = {v: b.vertex() for v in inner}
        for q in range(len(clauses)):
            cmap[(a, q)] = b.vertex()
        for q, cl in enumerate(clauses):
            for var, o in zip(cl, occ[q]):
                m = dict(vmap[(a, var)])
                m[tmpl.attach[o]] = cmap[(a, q)]
                vmap.setdefault((a, var, "att"), {})[tmpl.attach[o]] = cmap[(a, q)]
        for var in range(1, f.varCount + 1):
            m = dict(vmap[(a, var)])
            m.update(vmap.get((a, var, "att"), {}))
            for u, v in tmpl.edges:
                b.edge(m[u], m[v])
    core = b.n // copies if copies else 0
    ledger = []
    half = copies // 2
    for a in range(half):
        for q in range(len(clauses)):
            u, v = cmap[(a, q)], cmap[(a + half, q)]
            b.edge(u, v)
            ledger.append((min(u, v), max(u, v), "clause %d: copy %d with copy %d" % (q, a, a + half)))
    vm = {k: v for k, v in vmap.items() if len(k) == 2}
    return ReductionOutput("rc", f, b.n, sorted(b.edges), vm,
                           {k: {"clause": v} for k, v in cmap.items()}, copies, ledger, core,
                           {"clauseRepeat": CLAUSE_REPEAT, "template": tmpl.name})


# ---- flip reduction ----

def buildFlipReduction(f: PositiveCnf, copies=FLIP_COPIES) -> ReductionOutput:
    """Core: one 8-cycle per variable, two clause vertices per clause, an octahedron
    at each of them, blue danglers everywhere else.  Every dangler slot gets a
    generator (red K4) whose 16 dangling edges feed the 16 core copies.
    """
    _check_formula(f, NAE)
    if copies != FLIP_COPIES:
        raise ReductionError("the dangler generator serves exactly %d copies" % FLIP_COPIES)
    occ = _occurrences(f.clauses)
    b = _Builder()
    vmap, cmap = {}, {}
    slots = []  # per copy: list of anchor vertices, in a fixed order
    meta_edges = {"cycle": [], "clause": [], "octahedron": []}
    for a in range(copies):
        anchors = []

        def aux(A):
            # octahedron through A, 7 dangler slots on each other vertex
            vs = [A] + [b.vertex() for _ in range(5)]
            opp = {0: 1, 1: 0, 2: 3, 3: 2, 4: 5, 5: 4}
            for i in range(6):
                for j in range(i + 1, 6):
                    if opp[i] != j:
                        meta_edges["octahedron"].append(b.edge(vs[i], vs[j]))
            for v in vs[1:]:
                anchors.extend([v] * 7)
            return vs

        for var in range(1, f.varCount + 1):
            u = [b.vertex() for _ in range(8)]
            for e in variable_cycle_edges(u):
                meta_edges["cycle"].append(b.edge(*e))
            octs = [aux(x) for x in u]
            for x in u:
                anchors.extend([x] * 3)
            vmap[(a, var)] = {"cycle": u, "octahedra": octs}
        for q, cl in enumerate(f.clauses):
            L, R = b.vertex(), b.vertex()
            octs = [aux(L), aux(R)]
            pos, neg = [], []
            for var, o in zip(cl, occ[q]):
                u = vmap[(a, var)]["cycle"]
                x0, x1, x2 = u[2 * o], u[2 * o + 1], u[(2 * o + 2) % 8]
                for y in (x0, x1):
                    meta_edges["clause"].append(b.edge(L, y))
                for y in (x1, x2):
                    meta_edges["clause"].append(b.edge(R, y))
                pos.append(_key(x0, x1))
                neg.append(_key(x1, x2))
            cmap[(a, q)] = {"L": L, "R": R, "octahedra": octs, "positive": pos, "negative": neg}
        slots.append(anchors)
    core = b.n // copies
    ledger = []
    generators = []
    nslots = len(slots[0]) if slots else 0
    for s in range(nslots):
        g = [b.vertex() for _ in range(4)]
        for i in range(4):
            for j in range(i + 1, 4):
                b.edge(g[i], g[j])
        for qv in range(4):
            for a in range(4 * qv, 4 * qv + 4):
                e = b.edge(g[qv], slots[a][s])
                ledger.append((e[0], e[1], "slot %d: generator vertex %d to copy %d" % (s, qv, a)))
        generators.append(g)
    out = ReductionOutput("flip", f, b.n, sorted(b.edges), vmap, cmap, copies, ledger, core,
                          {"generators": len(generators), "slotsPerCopy": nslots})
    out.generators = generators
    out.parts = meta_edges
    return out


# ---- forward colorings ----

def _rc_coloring(red: ReductionOutput, assignment):
    tmpl = loadTemplate(red.meta.get("template", "rc_variable"))
    true_state = {e: (RED if e in set(_bases(tmpl)) else BLUE) for e in tmpl.edges}
    false_state = dict(tmpl.edges)  # the reference coloring
    col = {}
    att = set(tmpl.attach)
    clauses = [cl for cl in red.formula.clauses for _ in range(CLAUSE_REPEAT)]
    occ = _occurrences(clauses)
    for a in range(red.copyCount):
        for var in range(1, red.formula.varCount + 1):
            m = dict(red.variableMap[(a, var)])
            for q, cl in enumerate(clauses):
                for v, o in zip(cl, occ[q]):
                    if v == var:
                        m[tmpl.attach[o]] = red.clauseMap[(a, q)]["clause"]
            state = true_state if assignment[var - 1] else false_state
            for (u, v), c in state.items():
                col[_key(m[u], m[v])] = c
    for u, v, _ in red.pairingLedger:
        col[(u, v)] = RED
    return col


def _bases(tmpl):
    return [(2 * k, 2 * k + 1) for k in range(len(tmpl.attach))]


def _flip_coloring(red: ReductionOutput, assignment):
    col = {e: BLUE for e in red.edges}  # danglers, clause edges
    for e in red.parts["octahedron"]:
        col[e] = RED
    for g in red.generators:
        for i in range(4):
            for j in range(i + 1, 4):
                col[_key(g[i], g[j])] = RED
    for (a, var), m in red.variableMap.items():
        for i, e in enumerate(variable_cycle_edges(m["cycle"])):
            positive = i % 2 == 0
            col[_key(*e)] = BLUE if positive == bool(assignment[var - 1]) else RED
    return col


def assignmentToColoring(red: ReductionOutput, assignment):
    """Edge coloring {(u, v): 1 red | 2 blue} realizing a satisfying assignment."""
    variant = ONE_IN_THREE if red.variant == "rc" else NAE
    if len(assignment) != red.formula.varCount:
        raise ReductionError("assignment has %d values for %d variables"
                             % (len(assignment), red.formula.varCount))
    if not satisfies(red.formula, assignment, variant):
        raise ReductionError("assignment does not satisfy the formula")
    return _rc_coloring(red, assignment) if red.variant == "rc" else _flip_coloring(red, assignment)


# ---- verifiers and decoders ----

@dataclass
class ColoringCheck:
    ok: bool
    vertex: int = -1
    reason: str = ""


def verifyColoring(red: ReductionOutput, colors) -> ColoringCheck:
    g = red.graph(colors)
    if red.variant == "flip":
        res = checkFlip(g)
        return ColoringCheck(res.ok, getattr(res, "vertex", -1), "" if res.ok else str(res))
    return verify_rc(g)


def verify_rc(g: ColoredGraph, mode=RcMode()) -> ColoringCheck:
    prof = triangleProfile(g)
    for v in range(g.n):
        p = prof[v]
        if tuple(p.deg) != tuple(mode.r) or tuple(p.nbhdEdges) != tuple(mode.c):
            return ColoringCheck(False, v, "vertex %d has deg %s, nbhd %s" % (v, list(p.deg), list(p.nbhdEdges)))
    return ColoringCheck(True)


def decodeAssignment(red: ReductionOutput, colors, copy=0):
    """Variable values read from one copy: rc TRUE iff base 0 is red; flip TRUE iff cycle edge 0 is blue."""
    out = []
    for var in range(1, red.formula.varCount + 1):
        m = red.variableMap[(copy, var)]
        if red.variant == "rc":
            out.append(colors[_key(m[0], m[1])] == RED)
        else:
            u = m["cycle"]
            out.append(colors[_key(u[0], u[1])] == BLUE)
    return tuple(out)


def ledger_triangle_free(red: ReductionOutput):
    """Pairing edges lying in a triangle (empty when the scheme is sound)."""
    adj = [set() for _ in range(red.n)]
    for u, v in red.edges:
        adj[u].add(v)
        adj[v].add(u)
    return [(u, v) for u, v, _ in red.pairingLedger if adj[u] & adj[v]]


@dataclass
class StructureReport:
    ok: bool
    problems: list

    def to_json(self):
        return {"ok": self.ok, "problems": self.problems[:20]}


def verifyStructure(red: ReductionOutput) -> StructureReport:
    """Gadget instances wired as their templates, expected degrees, triangle-free pairing."""
    probs = []
    es = set(red.edges)
    deg = [0] * red.n
    for u, v in red.edges:
        deg[u] += 1
        deg[v] += 1
    if red.variant == "flip":
        for (a, var), m in red.variableMap.items():
            u = m["cycle"]
            for e in variable_cycle_edges(u):
                if _key(*e) not in es:
                    probs.append("copy %d var %d: missing cycle edge %s" % (a, var, e))
            for x in u:
                if deg[x] != 2 + 4 + 3 + 2:
                    probs.append("copy %d var %d: cycle vertex %d has degree %d" % (a, var, x, deg[x]))
        for (a, q), m in red.clauseMap.items():
            for key in ("L", "R"):
                if deg[m[key]] != 4 + 6:
                    probs.append("copy %d clause %d: %s has degree %d" % (a, q, key, deg[m[key]]))
        aux = flip_aux()
        for oct_list in [o for m in red.variableMap.values() for o in m["octahedra"]] + \
                [o for m in red.clauseMap.values() for o in m["octahedra"]]:
            for (p, r) in aux.edges:
                if _key(oct_list[p], oct_list[r]) not in es:
                    probs.append("octahedron at %d miswired" % oct_list[0])
            for v in oct_list[1:]:
                if deg[v] != 11:
                    probs.append("octahedron vertex %d has degree %d" % (v, deg[v]))
        for g in red.generators:
            for v in g:
                if deg[v] != 7:
                    probs.append("generator vertex %d has degree %d" % (v, deg[v]))
    else:
        tmpl = loadTemplate(red.meta.get("template", "rc_variable"))
        for (a, var), m in red.variableMap.items():
            for u, v in tmpl.edges:
                if u in m and v in m and _key(m[u], m[v]) not in es:
                    probs.append("copy %d var %d: missing edge" % (a, var))
        if any(d != 7 for d in deg):
            probs.append("degree other than 7 present")
    bad = ledger_triangle_free(red)
    if bad:
        probs.append("%d pairing edges lie in triangles" % len(bad))
    return StructureReport(not probs, probs)


def gadget_cluster(red: ReductionOutput, copy=0):
    """One copy of the core with its outgoing dangling edges as free-ended half-edges.

    flip: danglers are pinned blue, as the generator forces.  rc: the clause
    danglers stay open.  Returns (skeleton, fixed colors, constrained vertices).
    """
    per = red.coreSize
    lo, hi = copy * per, (copy + 1) * per
    inside = [(u, v) for u, v in red.edges if lo <= u < hi and lo <= v < hi]
    outside = [(u, v) for u, v in red.edges if (lo <= u < hi) != (lo <= v < hi)]
    edges = [(u - lo, v - lo) for u, v in inside]
    fixed = {}
    n = per
    for u, v in outside:
        x = u if lo <= u < hi else v
        e = (x - lo, n)
        edges.append(e)
        n += 1
        if red.variant == "flip":
            fixed[e] = BLUE
    return Skeleton(n, edges), fixed, list(range(per))
