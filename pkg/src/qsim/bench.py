"""Benchmark harness: untimed warm-up runs, then timed samples of full-state simulation."""
from __future__ import annotations

import csv
import io
import json
import logging
import statistics
import time
from dataclasses import asdict, dataclass, field

from . import library
from .errors import QsimError, ResourceError
from .simulator import get_backend

log = logging.getLogger(__name__)

DEFAULT_WARMUP = 40
DEFAULT_SAMPLES = 11
CROSS_CHECK_TOL = 1e-9

CSV_COLUMNS = ("circuit", "qubits", "backend", "mean_ns", "stddev_ns", "speedup")


class BenchmarkMismatch(QsimError):
    """Backends disagree on the final state of a benchmarked circuit."""


@dataclass
class BenchConfig:
    circuits: list[str]
    qubit_range: tuple[int, int]
    backends: list[str] = field(default_factory=lambda: ["unitary", "unitary-parallel"])
    warmup_iters: int = DEFAULT_WARMUP
    sample_iters: int = DEFAULT_SAMPLES
    seed: int = 0
    oracle: str | None = None
    force: bool = False

    def __post_init__(self):
        if isinstance(self.circuits, str):
            self.circuits = [self.circuits]
        lo, hi = self.qubit_range
        if not self.circuits:
            raise ValueError("at least one circuit is required")
        if lo < 1 or hi < lo:
            raise ValueError(f"empty or invalid qubit range {lo}-{hi}")
        if not self.backends:
            raise ValueError("at least one backend is required")
        if self.warmup_iters < 0:
            raise ValueError(f"warmup_iters must be >= 0, got {self.warmup_iters}")
        if self.sample_iters < 1:
            raise ValueError(f"sample_iters must be >= 1, got {self.sample_iters}")

    @property
    def qubits(self) -> range:
        return range(self.qubit_range[0], self.qubit_range[1] + 1)


@dataclass
class BenchRecord:
    circuit: str
    qubits: int
    backend: str
    mean_ns: float
    stddev_ns: float
    speedup: float = 1.0


@dataclass
class Skipped:
    circuit: str
    qubits: int
    backend: str
    reason: str


@dataclass
class BenchResult:
    records: list[BenchRecord]
    skipped: list[Skipped]


def time_simulation(sim, circuit, registry, warmup: int, samples: int, force: bool = False) -> list[int]:
    """Run ``warmup`` untimed simulations, then return ``samples`` wall times in ns."""
    for _ in range(warmup):
        sim.simulate_full_state(circuit, registry, force=force)
    times = []
    for _ in range(samples):
        t0 = time.perf_counter_ns()
        sim.simulate_full_state(circuit, registry, force=force)
        times.append(time.perf_counter_ns() - t0)
    return times


def run_bench(cfg: BenchConfig) -> BenchResult:
    """Benchmark every (circuit, qubits, backend) combination one after another.

    Combinations over a backend's memory guard are skipped with a warning.
    Before timing, all runnable backends simulate the circuit once and must
    agree within ``CROSS_CHECK_TOL``; speedups are relative to the first
    listed backend that ran at the same (circuit, qubits).
    """
    records: list[BenchRecord] = []
    skipped: list[Skipped] = []
    for name in cfg.circuits:
        for n in cfg.qubits:
            circuit, registry = library.build(name, n, cfg.oracle, cfg.seed)
            runnable = []
            for backend_id in cfg.backends:
                sim = get_backend(backend_id)
                try:
                    sim.check_resources(n, cfg.force)
                except ResourceError as exc:
                    log.info("skipping %s/%d on %s: %s", name, n, backend_id, exc)
                    skipped.append(Skipped(name, n, backend_id, str(exc)))
                    continue
                runnable.append((backend_id, sim))
            if not runnable:
                continue

            reference = None
            for backend_id, sim in runnable:
                state = sim.simulate_full_state(circuit, registry, force=cfg.force)
                if reference is None:
                    reference = (backend_id, state)
                    continue
                diff = state.max_abs_diff(reference[1])
                if diff > CROSS_CHECK_TOL:
                    raise BenchmarkMismatch(
                        f"{name}/{n}: {backend_id} differs from {reference[0]} by {diff:.3e}"
                    )

            rows = []
            for backend_id, sim in runnable:
                times = time_simulation(sim, circuit, registry, cfg.warmup_iters, cfg.sample_iters, cfg.force)
                mean = max(statistics.fmean(times), 1.0)
                stdev = statistics.stdev(times) if len(times) > 1 else 0.0
                rows.append(BenchRecord(name, n, backend_id, mean, stdev))
                log.info("%s/%d %s: mean %.0f ns", name, n, backend_id, mean)
            base = rows[0].mean_ns
            for r in rows:
                r.speedup = base / r.mean_ns
            records.extend(rows)
    return BenchResult(records, skipped)


def bench_command(cfg: BenchConfig) -> list[BenchRecord]:
    return run_bench(cfg).records


def report(records: list[BenchRecord], fmt: str = "table") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow([r.circuit, r.qubits, r.backend, f"{r.mean_ns:.1f}", f"{r.stddev_ns:.1f}",
                        f"{r.speedup:.3f}"])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([asdict(r) for r in records], indent=2) + "\n"
    if fmt == "table":
        header = ("circuit", "qubits", "backend", "mean (ms)", "stddev (ms)", "speedup")
        rows = [
            (r.circuit, str(r.qubits), r.backend, f"{r.mean_ns / 1e6:.3f}", f"{r.stddev_ns / 1e6:.3f}",
             f"{r.speedup:.3f}")
            for r in records
        ]
        widths = [max([len(h)] + [len(row[i]) for row in rows]) for i, h in enumerate(header)]
        lines = ["  ".join(h.ljust(w) if i < 3 else h.rjust(w) for i, (h, w) in enumerate(zip(header, widths)))]
        lines.append("  ".join("-" * w for w in widths))
        for row in rows:
            lines.append("  ".join(c.ljust(w) if i < 3 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths))))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}; expected table, csv or json")


def records_from_json(text: str) -> list[BenchRecord]:
    return [BenchRecord(**d) for d in json.loads(text)]
