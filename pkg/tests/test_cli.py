import csv
import io
import json
import os
import subprocess
import sys

import jsonschema
import pytest

from trireg import cli
from trireg.abelian import AbelianGroup, SymmetricSet, saveSet
from trireg.graph import complete_graph, cycle_graph, loadGraph, petersen_graph, saveGraph
from trireg.reductions import repeated_clause_instance, saveFormula

SCHEMAS = os.path.join(os.path.dirname(cli.__file__), "schemas")


def schema(name):
    with open(os.path.join(SCHEMAS, name + ".json")) as fh:
        return json.load(fh)


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, name, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    payload = json.loads(out)
    jsonschema.validate(payload, schema("error" if payload["status"] == "error" else name))
    assert payload["exitCode"] == code
    return code, payload


@pytest.fixture
def k5(tmp_path):
    p = tmp_path / "k5.trg"
    saveGraph(complete_graph(5), p)
    return p


def test_verify_k5(capsys, k5):
    code, out, _ = run(capsys, "verify", k5)
    assert code == 0 and "(r=[4], c=[6]) uniform" in out


def test_verify_json(capsys, k5):
    code, p = run_json(capsys, "verify", "verify", k5)
    assert code == 0 and p["profile"] == {"uniform": True, "r": [4], "c": [6]}


def test_verify_nonuniform(capsys, tmp_path):
    from trireg.graph import disjoint_union
    p = tmp_path / "g.trg"
    saveGraph(disjoint_union(complete_graph(3), cycle_graph(4)), p)
    code, payload = run_json(capsys, "verify", "verify", p)
    assert code == 1 and payload["status"] == "NonUniform"


def test_verify_flip_violation(capsys, tmp_path):
    # all edges in the top color: closed counts increase instead of decrease
    p = tmp_path / "k4.trg"
    saveGraph(complete_graph(4, color=2, t=2), p)
    code, payload = run_json(capsys, "verify", "verify", p, "--flip")
    assert code == 1 and payload["flip"]["ok"] is False


def test_verify_missing_file(capsys, tmp_path):
    code, payload = run_json(capsys, "verify", "verify", tmp_path / "nope.trg")
    assert code == 2 and payload["status"] == "error"


def test_product(capsys, tmp_path):
    a, b, out = tmp_path / "a.trg", tmp_path / "b.trg", tmp_path / "p.trg"
    saveGraph(complete_graph(3), a)
    saveGraph(petersen_graph(), b)
    code, payload = run_json(capsys, "product", "product", a, b, "--out", out)
    assert code == 0 and payload["r"] == [5] and payload["c"] == [1] and payload["verified"]
    assert loadGraph(out).n == 30


def test_construct_clique_product(capsys, tmp_path):
    code, payload = run_json(capsys, "clique-product", "construct", "clique-product", "--r", 4, "--c", 2,
                             "--out", tmp_path / "s.set")
    assert code == 0 and payload["achieved"] == {"r": 4, "c": 2}


def test_construct_clique_product_none(capsys):
    code, payload = run_json(capsys, "clique-product", "construct", "clique-product", "--r", 4, "--c", 5)
    assert code == 1 and payload["status"] == "no-plan"


def test_construct_thm13_diagnostic(capsys):
    code, payload = run_json(capsys, "thm13", "construct", "thm13", "--r", 24, "--x", 8, "--y", 12,
                             "--diagnostic")
    assert code == 0 and payload["status"] == "ok" and payload["case"] == 1


def test_construct_thm13_half_integer_y(capsys):
    code, payload = run_json(capsys, "thm13", "construct", "thm13", "--r", 13, "--x", 7, "--y", "17/2",
                             "--diagnostic")
    assert code == 0 and payload["status"] == "ok"


def test_construct_thm13_strict_rejects_small(capsys):
    code, payload = run_json(capsys, "thm13", "construct", "thm13", "--r", 24, "--x", 8, "--y", 12)
    assert code == 2


def test_construct_flip3(capsys):
    code, payload = run_json(capsys, "flip3", "construct", "flip3", "--a1", 16)
    assert code == 0 and payload["degrees"] == [16, 17, 64]


def test_construct_unbounded(capsys):
    code, payload = run_json(capsys, "unbounded-flip", "construct", "unbounded-flip", "--t", 4)
    assert code == 0 and payload["flipValid"] and payload["degrees"][0] == 3


def test_construct_lp_build(capsys, tmp_path):
    out = tmp_path / "lp.trg"
    code, payload = run_json(capsys, "lp-build", "construct", "lp-build", "--r", "4", "--c", "6", "--out", out)
    assert code == 0 and payload["vertices"] == loadGraph(out).n


def test_spectrum_csv_stdout(capsys):
    code, out, _ = run(capsys, "spectrum", "--r", 4, "--max-order", 24, "--threads", 1)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and sorted({int(r["c"]) for r in rows}) == [0, 1, 2, 3, 4, 6]


def test_spectrum_json_band(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, payload = run_json(capsys, "spectrum", "spectrum", "--r", 6, "--max-order", 16, "--threads", 1,
                             "--band", "--out", out)
    assert code == 0 and payload["band"]["ok"] and out.exists()


def test_lp_feasible(capsys):
    code, payload = run_json(capsys, "feasible", "lp", "feasible", "--r", 4, "--c", 6)
    assert code == 0 and payload["status"] == "Feasible"


def test_lp_infeasible(capsys):
    code, out, _ = run(capsys, "lp", "feasible", "--r", 4, "--c", 7)
    assert code == 1 and out.startswith("Infeasible")


def test_lp_feasible_flip(capsys):
    code, payload = run_json(capsys, "feasible", "lp", "feasible", "--r", "1,5", "--flip")
    assert code == 1


def test_lp_feasible_needs_c(capsys):
    code, _, err = run(capsys, "lp", "feasible", "--r", 4)
    assert code == 2 and "--c" in err


def test_lp_cuts(capsys):
    code, payload = run_json(capsys, "cuts", "lp", "cuts", "--r", "3,5,7")
    assert code == 1 and payload["rounds"] >= 1


def test_lp_flip_scan(capsys):
    code, payload = run_json(capsys, "flip-scan", "lp", "flip-scan", "--t", 2, "--r1-max", 1,
                             "--r1-min", 1, "--rt-max", 20)
    assert code == 0 and payload["status"] == "all-infeasible"


def test_reduce_and_solve(capsys, tmp_path):
    f, g = tmp_path / "f.pcnf", tmp_path / "g.trg"
    saveFormula(repeated_clause_instance(), f)
    code, payload = run_json(capsys, "reduce", "reduce", "--variant", "rc", "--in", f, "--out", g)
    assert code == 0 and payload["structure"]["ok"]
    code, payload = run_json(capsys, "solve", "solve", "--mode", "rc", "--in", g, "--budget", 100000)
    assert code in (1, 3)


def test_solve_small(capsys, tmp_path):
    g = tmp_path / "k3.trg"
    saveGraph(complete_graph(3), g)
    code, payload = run_json(capsys, "solve", "solve", "--mode", "rc", "--in", g)
    assert code == 1 and payload["verdict"] == "Unsat"


def test_subgroup(capsys, tmp_path):
    S = SymmetricSet(AbelianGroup((8,)), [(2,), (4,), (6,)])
    p = tmp_path / "s.set"
    saveSet(S, p)
    code, payload = run_json(capsys, "subgroup", "subgroup", "--set", p)
    assert code == 0 and payload["subgroupSize"] == 4


def test_dft(capsys):
    code, payload = run_json(capsys, "dft", "dft", "--group", "4", "--members", "1;3")
    values = {tuple(c["character"]): c["value"] for c in payload["coefficients"]}
    assert code == 0 and values[(0,)] == pytest.approx(2) and values[(2,)] == pytest.approx(-2)


def test_dft_needs_set(capsys):
    code, payload = run_json(capsys, "dft", "dft", "--group", "4")
    assert code == 2


@pytest.mark.parametrize("argv", [[], ["nosuch"], ["lp", "feasible"]])
def test_usage_errors(capsys, argv):
    assert cli.main(argv) == 2


def test_console_script(k5):
    out = subprocess.run([sys.executable, "-m", "trireg.cli", "verify", str(k5)], capture_output=True, text=True)
    assert out.returncode == 0 and "uniform" in out.stdout
