import io
import json

import pytest

from src.cli.main import main
from src.cli.output import BOUNDS_CSV_HEADER, SWEEP_CSV_HEADER
from src.api.schemas.experiments import CSV_HEADER
from src.models.graph import Graph
from src.parser.edge_list import format_edge_list, read_edge_list
from src.services import closure_engine
from src.services.witness_tracker import Violation, audit_closure
from tests.helpers import k_minus_edge, step_estimator


@pytest.fixture
def k6_minus_edge_file(tmp_path):
    path = tmp_path / "k6_minus_edge.txt"
    g = k_minus_edge(6)
    path.write_text(format_edge_list(g.n, g.edges()))
    return str(path)


@pytest.fixture
def planted_threshold(mocker):
    """Replaces Monte Carlo runs with a deterministic step at 2 / sqrt(n)."""
    return mocker.patch(
        "src.services.experiment_service.estimate_probability",
        side_effect=step_estimator(lambda n: 2 * n ** -0.5),
    )


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err

# --- Замыкание ---

def test_closure_text(capsys, k6_minus_edge_file):
    code, out, _ = run(capsys, "closure", "--pattern", "3", "3", "--input", k6_minus_edge_file)
    assert code == 0
    lines = out.splitlines()
    assert lines[:4] == ["pattern: K_3,3", "n: 6", "percolated: true", "infections: 1"]
    assert lines[4] == "t=1 edge=0 1 copy=0 2 3 | 1 4 5"

def test_closure_json(capsys, k6_minus_edge_file):
    code, out, _ = run(capsys, "closure", "--pattern", "3", "3", "--input", k6_minus_edge_file, "--json")
    assert code == 0
    document = json.loads(out)
    assert document["meta"]["command"].startswith("closure --pattern 3 3")
    assert document["percolated"] is True
    assert document["trace"][0]["copy_witness"] == {"side_a": [0, 2, 3], "side_b": [1, 4, 5]}

def test_closure_writes_output_file(capsys, k6_minus_edge_file, tmp_path):
    target = str(tmp_path / "closed.txt")
    code, _, _ = run(capsys, "closure", "--pattern", "3", "3", "--input", k6_minus_edge_file, "--output", target)
    assert code == 0
    assert read_edge_list(target) == Graph.complete(6)

def test_closure_witness_audit_runs_the_closure_once(capsys, k6_minus_edge_file, mocker):
    spy = mocker.spy(closure_engine.ClosureEngine, "run")
    code, out, _ = run(capsys, "closure", "--pattern", "3", "3", "--input", k6_minus_edge_file, "--witness")
    assert code == 0
    assert "audit: checked, 0 violations" in out
    assert spy.call_count == 1

def test_percolates_reads_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("4 3\n0 1\n1 2\n2 3\n"))
    code, out, _ = run(capsys, "percolates", "--pattern", "2", "2")
    assert code == 0
    assert out == "percolated: false\n"

def test_bad_edge_list_reports_line(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3 1\n2 1\n")
    code, out, err = run(capsys, "closure", "--pattern", "3", "3", "--input", str(path))
    assert code == 1
    assert out == ""
    assert "line 2" in err

def test_missing_input_file(capsys, tmp_path):
    code, _, err = run(capsys, "closure", "--pattern", "3", "3", "--input", str(tmp_path / "nope.txt"))
    assert code == 1
    assert "cannot read" in err

# --- Ошибки использования ---

@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["estimate-prob", "--n", "10", "--pattern", "3", "3", "--p", "0.5", "--trials", "0"],
    ["estimate-prob", "--n", "10", "--pattern", "3", "1", "--p", "0.5"],
    ["find-threshold", "--n", "10", "--pattern", "3", "3", "--lo", "0.1"],
    ["balanced", "3"],
    ["audit", "--n", "8", "--pattern", "3", "3", "--p", "0.5", "--runs", "0"],
])
def test_usage_errors_exit_with_one(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 1
    assert out == ""

def test_help_exits_cleanly(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    assert "find-threshold" in out

# --- Паттерны и леммы ---

def test_balanced_text(capsys):
    code, out, _ = run(capsys, "balanced", "4", "3")
    assert code == 0
    assert "balanced: true" in out.splitlines()
    assert "lambda: 2" in out.splitlines()

def test_balanced_json(capsys):
    code, out, _ = run(capsys, "balanced", "5", "3", "--json")
    document = json.loads(out)
    assert document["meta"]["command"] == "balanced 5 3"
    assert document["balanced"] is False
    assert document["worst_subgraph"] == [4, 3]
    assert document["worst_ratio"] == "11/5"

def test_verify_lemmas_failure_is_a_finding(capsys):
    code, out, _ = run(capsys, "verify-lemmas", "--r", "5", "--s", "3", "--m-max", "3")
    assert code == 0
    assert "single overlap: FAIL" in out
    assert "failure witness (P,Q)=(4,3) value -1/6" in out
    assert "in proven range: false" in out

def test_verify_lemmas_with_dense_counts(capsys):
    code, out, _ = run(capsys, "verify-lemmas", "--r", "3", "--s", "3", "--m-max", "2",
                       "--dense-samples", "3", "--dense-n", "6", "--dense-p", "0.5", "--json")
    assert code == 0
    document = json.loads(out)
    assert document["passed"] is True
    assert document["case3"]["chain"][0] == {"m": 2, "rhs": "11/2", "target": 7, "holds": False}
    assert [row["m"] for row in document["dense"]["means"]] == list(range(1, 10))

def test_bounds_csv(capsys):
    code, out, _ = run(capsys, "bounds", "--pattern", "4", "3", "--n", "1000", "100", "--csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == BOUNDS_CSV_HEADER
    assert [line.split(",")[0] for line in lines[1:]] == ["100", "1000"]
    assert all(line.split(",")[5] == "true" for line in lines[1:])

# --- Эксперименты ---

def test_estimate_csv_is_reproducible(capsys):
    argv = ["estimate-prob", "--n", "10", "--pattern", "3", "3", "--p", "0.6",
            "--trials", "6", "--seed", "11", "--workers", "1", "--csv"]
    code, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert code == 0
    assert first == second
    lines = first.splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[1].startswith("10,3,3,0.6,6,")
    assert lines[1].endswith(",11")

def test_estimate_json_meta(capsys):
    code, out, _ = run(capsys, "estimate-prob", "--n", "8", "--pattern", "3", "3", "--p", "1.0",
                       "--trials", "3", "--workers", "1", "--json")
    document = json.loads(out)
    assert code == 0
    assert document["meta"]["version"]
    assert document["percolated_fraction"] == 1.0

def test_find_threshold_text(capsys, planted_threshold):
    code, out, _ = run(capsys, "find-threshold", "--n", "100", "--pattern", "3", "3",
                       "--lo", "0.05", "--hi", "0.5", "--rel-tol", "0.05")
    assert code == 0
    assert "p_hat: " in out
    assert "#0 bracket p=0.05" in out
    p_hat = float(next(line for line in out.splitlines() if line.startswith("p_hat: ")).split()[1])
    assert p_hat == pytest.approx(0.2, rel=0.05)

def test_sweep_csv(capsys, planted_threshold):
    code, out, _ = run(capsys, "sweep", "--pattern", "4", "3", "--n-list", "50", "100", "200",
                       "--trials", "4", "--rel-tol", "0.02", "--csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == SWEEP_CSV_HEADER
    assert [line.split(",")[0] for line in lines[1:]] == ["50", "100", "200"]
    assert all(line.split(",")[6] == "ok" for line in lines[1:])

def test_sweep_text_reports_exponents(capsys, planted_threshold):
    code, out, _ = run(capsys, "sweep", "--pattern", "4", "3", "--n-list", "50", "100", "200",
                       "--trials", "4", "--rel-tol", "0.02")
    assert code == 0
    assert "theory exponent: -1/2 (-0.5)" in out
    fitted = next(line for line in out.splitlines() if line.startswith("fitted exponent: "))
    assert float(fitted.split(": ")[1]) == pytest.approx(-0.5, abs=0.05)

# --- Аудит ---

def test_audit_on_seeded_runs(capsys):
    code, out, _ = run(capsys, "audit", "--n", "10", "--pattern", "3", "3", "--p", "0.6", "--runs", "3")
    assert code == 0
    assert out.splitlines()[1] == "status: checked"
    assert out.splitlines()[-1] == "total violations: 0"

def test_audit_exits_two_on_violation(capsys, mocker):
    def with_violation(graph, pattern, seed=None, sandwich_L=2):
        audit = audit_closure(graph, pattern, seed=seed, sandwich_L=sandwich_L)
        audit.violations.append(Violation(check="connectivity", edge=None, detail="planted"))
        return audit

    mocker.patch("src.cli.main.audit_closure", side_effect=with_violation)
    code, out, _ = run(capsys, "audit", "--n", "8", "--pattern", "3", "3", "--p", "0.5", "--runs", "1")
    assert code == 2
    assert "planted" in out

# --- База результатов ---

def test_init_db_reports_tables(capsys):
    code, out, _ = run(capsys, "init-db")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "tables: experiment_runs, probe_records"
    assert [line.split(":")[0] for line in lines[1:]] == ["stored estimate runs", "stored threshold runs"]
