"""Command-line entry point: `trireg <subcommand> ...`.

Exit codes: 0 success / feasible / verified, 1 verified negative
(Infeasible, Unsat, NonUniform, flip violation), 2 error, 3 Unknown or Timeout.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import abelian, constructions, graph, spectrum
from .lp import (Feasible, Infeasible, TriangleDensityVector, buildSystem, flipBoundedScan,
                 flipSystem, refuteWithCuts, solveFeasibility, triples, xname)
from .reductions import build as rbuild
from .reductions import formulas, solver

OK, NEGATIVE, ERROR, UNKNOWN = 0, 1, 2, 3
VERDICT_CODE = {"Feasible": OK, "Infeasible": NEGATIVE, "Unknown": UNKNOWN,
                "Coloring": OK, "Unsat": NEGATIVE, "Timeout": UNKNOWN}


class CliError(Exception):
    pass


def _ints(text):
    return tuple(int(x) for x in text.replace(",", " ").split())


def _emit(args, payload, text, code):
    payload = dict(payload)
    payload.setdefault("command", args.cmd_name)
    payload["exitCode"] = code
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    elif text:
        print(text)
    return code


def _profile_json(p):
    if p.uniform:
        return {"uniform": True, "r": list(p.r), "c": list(p.c)}
    (a, b), (pa, pb) = p.witnesses, p.profiles
    return {"uniform": False, "witnesses": [a, b],
            "profiles": [{"deg": list(pa.deg), "nbhdEdges": list(pa.nbhdEdges)},
                         {"deg": list(pb.deg), "nbhdEdges": list(pb.nbhdEdges)}]}


# ---- graph commands ----

def cmd_verify(args):
    g = graph.loadGraph(args.file)
    p = graph.checkTriangleRegular(g)
    payload = {"status": "uniform" if p.uniform else "NonUniform", "profile": _profile_json(p),
               "vertices": g.n, "edges": g.m}
    text = str(p)
    code = OK if p.uniform else NEGATIVE
    if args.flip:
        f = graph.checkFlip(g)
        payload["flip"] = {"ok": f.ok, "detail": str(f)}
        text += "\n" + str(f)
        if not f.ok:
            code = NEGATIVE
            payload["status"] = "Violation"
    return _emit(args, payload, text, code)


def cmd_product(args):
    gs = [graph.loadGraph(p) for p in args.files]
    if any(g.t != gs[0].t for g in gs):
        raise CliError("all factors must use the same t")
    terms = [graph.profileTerm(g, p) for g, p in zip(gs, args.files)]
    total = terms[0]
    for tm in terms[1:]:
        total = graph.addProfiles(total, tm)
    payload = {"status": "ok", "r": list(total.r), "c": list(total.c),
               "vertices": math.prod(g.n for g in gs)}
    if args.out:
        prod = graph.productOf(gs)
        graph.saveGraph(prod, args.out)
        p = graph.checkTriangleRegular(prod)
        payload["verified"] = p.uniform and tuple(p.r) == total.r and tuple(p.c) == total.c
    return _emit(args, payload, "(r=%s, c=%s) product of %d factors" % (list(total.r), list(total.c), len(gs)), OK)


# ---- construct ----

def cmd_clique_product(args):
    rep = constructions.clique_product_report(args.r, args.c)
    if rep["plan"] is None:
        return _emit(args, dict(rep, status="no-plan"), "no clique-product plan for r=%d c=%d" % (args.r, args.c), NEGATIVE)
    S = constructions.buildCliqueProduct(constructions.CliqueProductPlan(tuple(rep["plan"])))
    r, c = len(S), abelian.tripleCount(S) // 2
    if args.out:
        abelian.saveSet(S, args.out)
    payload = dict(rep, status="ok", groupModuli=list(S.group.moduli), achieved={"r": r, "c": c})
    return _emit(args, payload, "cliques %s: r=%d c=%d" % (rep["plan"], r, c), OK)


def cmd_thm13(args):
    res = constructions.theorem13GeneratingSet(args.r, args.x, args.y, strict=not args.diagnostic)
    if args.out:
        abelian.saveSet(res.generatingSet, args.out)
    payload = dict(res.to_json(), status="ok" if res.ok else "mismatch")
    text = "case %s: target c=%s achieved c=%s" % (res.params.caseTag, res.targetC, res.achievedC)
    return _emit(args, payload, text, OK if res.ok else NEGATIVE)


def _flip_report(args, rep):
    payload = dict(rep.to_json(), status="valid" if rep.flipValid else "Violation")
    text = "degrees %s closed %s flipValid=%s" % (list(rep.degrees), list(rep.closed), rep.flipValid)
    return _emit(args, payload, text, OK if rep.flipValid else NEGATIVE)


def cmd_flip3(args):
    return _flip_report(args, constructions.flip3Construction(args.a1))


def cmd_unbounded(args):
    inner = constructions.default_inner(args.t)
    s = args.s if args.s is not None else constructions.min_scale(args.t, inner)
    return _flip_report(args, constructions.unboundedFlipConstruction(args.t, s, inner))


def _density_from_witness(t, w):
    return TriangleDensityVector.from_map(t, {T: Fraction(w.get(xname(T), 0)) for T in triples(t)})


def cmd_lp_build(args):
    r, c = _ints(args.r), _ints(args.c)
    res = solveFeasibility(buildSystem(r, c))
    if not isinstance(res, Feasible):
        return _emit(args, dict(res.to_json(), status=res.verdict), "system is %s" % res.verdict,
                     VERDICT_CODE[res.verdict])
    rep = constructions.lpToGraph(r, c, _density_from_witness(len(r), res.witness), strict=args.strict)
    if args.out:
        graph.saveGraph(rep.graph, args.out)
    payload = dict(rep.to_json(), status="ok")
    return _emit(args, payload, "built %d vertices, c'=%s (target %s)" % (rep.graph.n, list(rep.cAchieved), list(c)), OK)


# ---- spectrum ----

def cmd_spectrum(args):
    threads = args.threads or spectrum.default_threads()
    recs = spectrum.spectrumForR(args.r, args.max_order, threads)
    if args.out:
        spectrum.emitSpectrumCsv(recs, args.out)
    payload = {"status": "ok", "r": args.r, "maxOrder": args.max_order, "c": [x.c for x in recs]}
    code = OK
    if args.band:
        band = spectrum.forbiddenBandCheck(args.r, args.max_order, records=recs)
        payload["band"] = band.to_json()
        code = OK if band.ok else NEGATIVE
    if args.json:
        return _emit(args, payload, "", code)
    if not args.out:
        spectrum.emitSpectrumCsv(recs, sys.stdout)
    else:
        print("c values: %s" % [x.c for x in recs])
    if args.band:
        print("band %s: in-band %s, tight %s" % (list(band.band), band.inBand, band.tightFound))
    return code


# ---- lp ----

def _lp_result(args, res, extra=None):
    payload = dict(res.to_json(), status=res.verdict)
    payload.update(extra or {})
    lines = [res.verdict]
    if isinstance(res, Infeasible):
        lines += ["  %s: %s" % (k, v) for k, v in res.certificate.items() if v != 0]
    elif isinstance(res, Feasible):
        lines += ["  %s = %s" % (k, v) for k, v in res.witness.items() if v != 0]
    return _emit(args, payload, "\n".join(lines), VERDICT_CODE[res.verdict])


def cmd_lp_feasible(args):
    r = _ints(args.r)
    if args.flip:
        return _lp_result(args, solveFeasibility(flipSystem(r)), {"r": list(r), "flip": True})
    c = _ints(args.c) if args.c is not None else None
    if c is None:
        raise CliError("--c is required unless --flip is given")
    return _lp_result(args, solveFeasibility(buildSystem(r, c)), {"r": list(r), "c": list(c)})


def cmd_lp_cuts(args):
    r = _ints(args.r)
    sys_ = flipSystem(r) if args.c is None else buildSystem(r, _ints(args.c))
    res = refuteWithCuts(sys_, maxRounds=args.max_rounds, form=args.form)
    return _lp_result(args, res, {"r": list(r), "rounds": getattr(res, "rounds", None), "form": args.form})


def cmd_lp_scan(args):
    rep = flipBoundedScan(args.t, args.r1_max, args.rt_max, cuts=args.cuts, r1Min=args.r1_min)
    payload = dict(rep.to_json(rows=args.rows), status="all-infeasible" if rep.all_infeasible() else "mixed")
    text = "%d vectors: %s, %d certificates, %.1fs" % (len(rep.rows), rep.counts(), rep.certificates, rep.seconds)
    return _emit(args, payload, text, OK)


# ---- reductions ----

def cmd_reduce(args):
    f = formulas.loadFormula(args.inp)
    red = rbuild.buildRcReduction(f) if args.variant == "rc" else rbuild.buildFlipReduction(f)
    graph.saveGraph(red.graph(), args.out)
    st = rbuild.verifyStructure(red)
    payload = dict(red.summary(), status="ok" if st.ok else "structure-error", structure=st.to_json())
    return _emit(args, payload, "wrote %d vertices, %d edges to %s" % (red.n, len(red.edges), args.out),
                 OK if st.ok else ERROR)


def cmd_solve(args):
    g = graph.loadGraph(args.inp)
    mode = solver.RcMode() if args.mode == "rc" else solver.FlipMode()
    res = solver.solveColoring(g, mode, args.budget)
    payload = {"status": res.verdict, "verdict": res.verdict, "nodes": res.nodes, "mode": args.mode}
    if isinstance(res, solver.Coloring) and args.out:
        graph.saveGraph(graph.ColoredGraph(2, g.n, [(u, v, c) for (u, v), c in res.colors.items()]), args.out)
    return _emit(args, payload, "%s after %d nodes" % (res.verdict, res.nodes), VERDICT_CODE[res.verdict])


# ---- abelian ----

def _load_set(args):
    if args.set:
        return abelian.loadSet(args.set)
    if args.group is None or args.members is None:
        raise CliError("give --set FILE or --group and --members")
    g = abelian.AbelianGroup(_ints(args.group))
    members = [_ints(m) for m in args.members.split(";") if m.strip()]
    return abelian.SymmetricSet(g, members)


def cmd_subgroup(args):
    S = _load_set(args)
    res = abelian.approxSubgroup(S)
    K = res.empirical_constant()
    H = sorted(res.subgroup)
    payload = {"status": "ok", "epsilon": str(res.epsilon), "subgroupSize": res.size,
               "subgroup": [list(h) for h in H], "overlapRatio": str(res.overlapRatio),
               "sizeRatio": str(res.sizeRatio), "empiricalConstant": None if K is None else str(K),
               "superGoodCount": res.superGoodCount}
    text = "eps=%s |H|=%d |H&S|/|S|=%s K'=%s" % (res.epsilon, res.size, res.overlapRatio, K)
    return _emit(args, payload, text, OK)


def cmd_dft(args):
    S = _load_set(args)
    coeffs = abelian.dftIndicator(S)
    best, val = abelian.maxNontrivialCoefficient(S)
    payload = {"status": "ok", "groupModuli": list(S.group.moduli), "size": len(S),
               "coefficients": [{"character": list(k), "value": v} for k, v in sorted(coeffs.items())],
               "maxNontrivial": {"character": list(best), "value": val},
               "plancherelDefect": abelian.plancherel_defect(S)}
    lines = ["%s %.9g" % (list(k), v) for k, v in sorted(coeffs.items())]
    lines.append("max nontrivial: %s %.9g" % (list(best), val))
    return _emit(args, payload, "\n".join(lines), OK)


# ---- parser ----

def build_parser():
    p = argparse.ArgumentParser(prog="trireg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(parent, name, fn, help_):
        sp = parent.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="print a JSON report")
        sp.set_defaults(fn=fn, cmd_name=name)
        return sp

    sp = add(sub, "verify", cmd_verify, "triangle-regularity profile of a graph file")
    sp.add_argument("file")
    sp.add_argument("--flip", action="store_true", help="also check the flip condition")

    sp = add(sub, "product", cmd_product, "Cartesian product of graph files")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--out")

    con = sub.add_parser("construct", help="explicit constructions")
    csub = con.add_subparsers(dest="construct", required=True)
    sp = add(csub, "clique-product", cmd_clique_product, "product of cliques with given (r, c)")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--c", type=int, required=True)
    sp.add_argument("--out")
    sp = add(csub, "thm13", cmd_thm13, "generating set for c = C(r,2) - rx/2 + y")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--y", type=Fraction, required=True, help="may be a half-integer, e.g. 17/2")
    sp.add_argument("--diagnostic", action="store_true", help="skip the parameter-range checks")
    sp.add_argument("--out")
    sp = add(csub, "flip3", cmd_flip3, "three-color flip construction")
    sp.add_argument("--a1", type=int, required=True)
    sp = add(csub, "unbounded-flip", cmd_unbounded, "flip graph with color-1 degree 7 - t")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--s", type=int, help="scale (default: smallest valid)")
    sp = add(csub, "lp-build", cmd_lp_build, "graph from a feasible density vector")
    sp.add_argument("--r", required=True)
    sp.add_argument("--c", required=True)
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--out")

    sp = add(sub, "spectrum", cmd_spectrum, "achievable c over abelian Cayley graphs")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--max-order", type=int, default=spectrum.DEFAULT_ORDER_CAP)
    sp.add_argument("--threads", type=int, default=0, help="default: TRIREG_THREADS or all cores")
    sp.add_argument("--band", action="store_true", help="check the forbidden band")
    sp.add_argument("--out", help="CSV path (default: stdout)")

    lp = sub.add_parser("lp", help="exact density systems")
    lsub = lp.add_subparsers(dest="lp", required=True)
    sp = add(lsub, "feasible", cmd_lp_feasible, "feasibility of the (r, c) system")
    sp.add_argument("--r", required=True)
    sp.add_argument("--c")
    sp.add_argument("--flip", action="store_true", help="flip system with c free")
    sp = add(lsub, "flip-scan", cmd_lp_scan, "scan all strictly increasing r in a box")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--r1-max", type=int, required=True)
    sp.add_argument("--rt-max", type=int, required=True)
    sp.add_argument("--r1-min", type=int, default=0)
    sp.add_argument("--cuts", action="store_true")
    sp.add_argument("--rows", action="store_true", help="include every row in the JSON report")
    sp = add(lsub, "cuts", cmd_lp_cuts, "refute with supersaturation cuts")
    sp.add_argument("--r", required=True)
    sp.add_argument("--c", help="fixed c (default: flip system)")
    sp.add_argument("--max-rounds", type=int, default=50)
    sp.add_argument("--form", choices=("goodman", "stated"), default="goodman",
                    help="supersaturation bound used for the cuts")

    sp = add(sub, "reduce", cmd_reduce, "build a hardness reduction from a .pcnf formula")
    sp.add_argument("--variant", choices=("rc", "flip"), required=True)
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--out", required=True)

    sp = add(sub, "solve", cmd_solve, "search for a valid 2-coloring")
    sp.add_argument("--mode", choices=("rc", "flip"), required=True)
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--budget", type=int, default=10 ** 7)
    sp.add_argument("--out")

    for name, fn, h in (("subgroup", cmd_subgroup, "approximating subgroup of a symmetric set"),
                        ("dft", cmd_dft, "Fourier coefficients of a symmetric set")):
        sp = add(sub, name, fn, h)
        sp.add_argument("--set", help="set file")
        sp.add_argument("--group", help="moduli, e.g. '12' or '2 6'")
        sp.add_argument("--members", help="';'-separated elements, e.g. '1;11'")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return ERROR if e.code else OK
    try:
        return args.fn(args)
    except (CliError, ValueError, OSError, KeyError, RuntimeError) as e:
        if getattr(args, "json", False):
            print(json.dumps({"command": args.cmd_name, "status": "error", "exitCode": ERROR,
                              "error": str(e)}))
        else:
            print("error: %s" % e, file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
