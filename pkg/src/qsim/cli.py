"""Command line front end.

    qsim run --circuit bell --qubits 2 --backend fsv
    qsim run --circuit qft --qubits 3 --backend unitary --output json
    qsim run --circuit deutsch-jozsa --qubits 4 --backend fsv --oracle constant1 --collapse --seed 7
    qsim bench --circuit entangle --qubits 4-10 --backend unitary --backend unitary-parallel

Exit codes: 0 success, 1 other failure, 2 usage error, 3 memory guard exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import library
from .bench import DEFAULT_SAMPLES, DEFAULT_WARMUP, BenchConfig, BenchmarkMismatch, report, run_bench
from .errors import CircuitError, QsimError, RegistryLookupError, ResourceError, ValidationError
from .simulator import get_backend, list_backends
from .state import RNG_ALGORITHM, format_state

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _qubit_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("-")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO-HI, got {text!r}") from None
    if a < 1 or b < a:
        raise argparse.ArgumentTypeError(f"invalid qubit range {text!r}")
    return a, b


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsim", description="Quantum circuit simulator")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one circuit")
    run.add_argument("--circuit", required=True, choices=sorted(library.GENERATORS))
    run.add_argument("--qubits", required=True, type=int)
    run.add_argument("--backend", required=True, choices=list_backends())
    run.add_argument("--output", choices=("text", "json"), default="text")
    run.add_argument("--collapse", action="store_true", help="print one sampled basis state")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--oracle", help="deutsch-jozsa oracle: constant0|constant1|"
                                      "balanced-bit:<k>|balanced-mask:<hex>|random")
    run.add_argument("--threshold", type=float, default=1e-9,
                     help="hide amplitudes with magnitude at or below this in text output")
    run.add_argument("--force", action="store_true", help="ignore the backend memory guard")

    bench = sub.add_parser("bench", help="time backends against each other")
    bench.add_argument("--circuit", action="append", choices=sorted(library.GENERATORS), required=True)
    bench.add_argument("--qubits", required=True, type=_qubit_range, help="N or LO-HI (inclusive)")
    bench.add_argument("--backend", action="append", choices=list_backends(),
                       help="repeatable; the first one is the speedup baseline "
                            "(default: unitary, unitary-parallel)")
    bench.add_argument("--warmup", type=int, default=DEFAULT_WARMUP)
    bench.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--oracle")
    bench.add_argument("--format", choices=("table", "csv", "json"), default="table")
    bench.add_argument("--force", action="store_true")
    return parser


def _run(args, out) -> int:
    circuit, registry = library.build(args.circuit, args.qubits, args.oracle, args.seed)
    sim = get_backend(args.backend)
    if args.collapse:
        res = sim.simulate_and_collapse(circuit, registry, seed=args.seed, force=args.force)
        if args.output == "json":
            print(json.dumps({
                "qubits": res.n_qubits,
                "basis_index": res.basis_index,
                "bitstring": res.bitstring,
                "measured": list(res.measured),
                "measured_bits": res.measured_bits,
                "seed": args.seed,
                "rng": RNG_ALGORITHM,
            }), file=out)
        else:
            print(res.bitstring, file=out)
        return EXIT_OK
    state = sim.simulate_full_state(circuit, registry, force=args.force)
    if args.output == "json":
        print(state.to_json(), file=out)
    else:
        print(format_state(state, args.threshold), file=out)
    return EXIT_OK


def _bench(args, out) -> int:
    cfg = BenchConfig(
        circuits=args.circuit,
        qubit_range=args.qubits,
        backends=args.backend or ["unitary", "unitary-parallel"],
        warmup_iters=args.warmup,
        sample_iters=args.samples,
        seed=args.seed,
        oracle=args.oracle,
        force=args.force,
    )
    result = run_bench(cfg)
    for s in result.skipped:
        print(f"warning: skipped {s.circuit}/{s.qubits} on {s.backend}: {s.reason}", file=sys.stderr)
    out.write(report(result.records, args.format))
    return EXIT_OK


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            return _run(args, out)
        return _bench(args, out)
    except ResourceError as exc:
        print(f"qsim: error: {exc} (use --force to override)", file=sys.stderr)
        return EXIT_RESOURCE
    except (CircuitError, RegistryLookupError, ValidationError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"qsim: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except (BenchmarkMismatch, QsimError) as exc:
        print(f"qsim: error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
