import io
import json
import subprocess
import sys

import pytest

from qsim.bench import (
    CSV_COLUMNS,
    BenchConfig,
    BenchmarkMismatch,
    BenchRecord,
    records_from_json,
    report,
    run_bench,
)
from qsim.cli import main
from qsim.simulator import register_backend
from qsim.state import StateVector
from qsim.unitary import UnitarySimulator


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_run_text():
    code, text = run("run", "--circuit", "bell", "--qubits", "2", "--backend", "fsv")
    assert code == 0
    assert text.strip() == "0.7071|00⟩ + 0.7071|11⟩"


def test_run_json():
    code, text = run("run", "--circuit", "entangle", "--qubits", "3", "--backend", "unitary", "--output", "json")
    assert code == 0
    st = StateVector.from_json(text)
    assert st.n_qubits == 3
    assert abs(st.to_array()[7] - 2 ** -0.5) <= 1e-12


def test_run_collapse_json():
    argv = ("run", "--circuit", "deutsch-jozsa", "--qubits", "4", "--backend", "fsv", "--oracle", "constant1",
            "--collapse", "--seed", "7", "--output", "json")
    code, text = run(*argv)
    payload = json.loads(text)
    assert code == 0
    assert payload["measured"] == [0, 1, 2]
    assert payload["measured_bits"] == "000"
    assert payload["rng"] == "numpy.PCG64" and payload["seed"] == 7
    assert run(*argv)[1] == text


def test_run_errors(capsys):
    assert run("run", "--circuit", "bell", "--qubits", "3", "--backend", "fsv")[0] == 2
    assert run("run", "--circuit", "deutsch-jozsa", "--qubits", "3", "--backend", "fsv", "--oracle", "x")[0] == 2
    assert run("run", "--circuit", "entangle", "--qubits", "15", "--backend", "unitary")[0] == 3
    assert "--force" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["run", "--circuit", "grover", "--qubits", "2", "--backend", "fsv"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qsim", "run", "--circuit", "qft", "--qubits", "1",
                           "--backend", "fsv"], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "0.7071|0⟩ + 0.7071|1⟩"


def test_bench_csv():
    code, text = run("bench", "--circuit", "entangle", "--circuit", "qft", "--qubits", "2-3",
                     "--backend", "unitary", "--backend", "fsv", "--warmup", "1", "--samples", "3",
                     "--format", "csv")
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 8
    assert {(r[0], r[1]) for r in rows} == {(c, q) for c in ("entangle", "qft") for q in ("2", "3")}
    assert all(float(r[5]) == 1.0 for r in rows if r[2] == "unitary")


def test_bench_skips_over_guard(capsys):
    code, text = run("bench", "--circuit", "entangle", "--qubits", "15", "--backend", "unitary",
                     "--backend", "fsv", "--warmup", "0", "--samples", "2", "--format", "json")
    assert code == 0
    records = records_from_json(text)
    assert [r.backend for r in records] == ["fsv"]
    assert records[0].speedup == 1.0
    assert "skipped entangle/15 on unitary" in capsys.readouterr().err


def test_bench_bad_range():
    with pytest.raises(SystemExit):
        main(["bench", "--circuit", "entangle", "--qubits", "5-3"])


def test_bench_config_validation():
    with pytest.raises(ValueError):
        BenchConfig([], (2, 3))
    with pytest.raises(ValueError):
        BenchConfig(["bell"], (3, 2))
    with pytest.raises(ValueError):
        BenchConfig(["bell"], (2, 2), sample_iters=0)
    with pytest.raises(ValueError):
        BenchConfig(["bell"], (2, 2), warmup_iters=-1)
    cfg = BenchConfig("qft", (2, 4))
    assert cfg.circuits == ["qft"] and list(cfg.qubits) == [2, 3, 4]
    assert (cfg.warmup_iters, cfg.sample_iters) == (40, 11)


class BrokenSimulator(UnitarySimulator):
    def simulate_full_state(self, circuit, registry=None, force=False):
        st = super().simulate_full_state(circuit, registry, force)
        arr = st.to_array()
        arr[0] += 1e-6
        return StateVector.from_array(arr, check_norm=False)


def test_bench_cross_check_catches_mismatch():
    register_backend("broken-test", BrokenSimulator)
    with pytest.raises(BenchmarkMismatch):
        run_bench(BenchConfig(["bell"], (2, 2), ["fsv", "broken-test"], 0, 1))
    code, _ = run("bench", "--circuit", "bell", "--qubits", "2", "--backend", "fsv",
                  "--backend", "broken-test", "--warmup", "0", "--samples", "1")
    assert code == 1


def test_report_formats():
    recs = [BenchRecord("bell", 2, "unitary", 2000.0, 10.0, 1.0), BenchRecord("bell", 2, "fsv", 1000.0, 5.0, 2.0)]
    table = report(recs, "table")
    assert table.splitlines()[0].split()[:3] == ["circuit", "qubits", "backend"]
    assert "2.000" in table
    assert records_from_json(report(recs, "json")) == recs
    assert report([], "table").count("\n") == 2
    with pytest.raises(ValueError):
        report(recs, "xml")
