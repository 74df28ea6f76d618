"""``djsim`` command line: run QASM files, run Deutsch-Jozsa on truth tables,
print synthesized oracles.

Exit codes: 0 success, 1 usage error, 2 parse/validation/IO error,
3 promise violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from .algorithms import classical_baseline, deutsch_jozsa, dj_circuit
from .errors import DJSimError, PromiseViolation, TruthTableError
from .noise import NoiseModel, sample_with_noise
from .oracle import parse_truth_table, synthesize_gates
from .qasm import QasmError, execute, parse
from .state import ShotHistogram

SCHEMA = "djsim/1"

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_PROMISE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class RunReport:
    command: list[str]
    seed: int | None = None
    shots: int | None = None
    histogram: ShotHistogram | None = None
    verdict: str | None = None
    outcome: str | None = None
    oracle_queries: int | None = None
    classical_queries: int | None = None
    zero_probability: float | None = None
    noise: NoiseModel | None = None
    extra: dict = field(default_factory=dict)
    wall_time_ms: float = 0.0

    def to_dict(self) -> dict:
        d = {"schema": SCHEMA, "command": self.command, "wall_time_ms": self.wall_time_ms}
        for key in ("seed", "shots", "verdict", "outcome", "oracle_queries",
                    "classical_queries", "zero_probability"):
            value = getattr(self, key)
            if value is not None:
                d[key] = value
        if self.histogram is not None:
            d["histogram"] = self.histogram.to_dict()
        if self.noise is not None:
            d["noise"] = self.noise.to_dict()
        d.update(self.extra)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def format_histogram(hist: ShotHistogram) -> str:
    return "".join(f"{key}: {n} ({100.0 * n / hist.shots:.1f}%)\n"
                   for key, n in hist.most_common())


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except FileNotFoundError:
        raise DJSimError(f"{path}: file not found") from None
    except OSError as exc:
        raise DJSimError(f"{path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError:
        raise DJSimError(f"{path}: not valid UTF-8") from None


def _load_noise(path: str | None) -> NoiseModel | None:
    if path is None:
        return None
    try:
        return NoiseModel.from_json(_read(path))
    except (ValueError, TypeError) as exc:
        raise DJSimError(f"{path}: bad noise config: {exc}") from None


def _load_table(path: str):
    try:
        return parse_truth_table(_read(path))
    except TruthTableError as exc:
        raise DJSimError(f"{path}: {exc}") from None


def cmd_run(args) -> tuple[RunReport, str]:
    source = _read(args.file)
    try:
        prog = parse(source)
    except QasmError as exc:
        exc.path = args.file
        raise
    noise = _load_noise(args.noise)
    hist = execute(prog, args.shots, args.seed, noise)
    report = RunReport(args.argv, args.seed, args.shots, hist, noise=noise)
    return report, format_histogram(hist)


def cmd_dj(args) -> tuple[RunReport, str]:
    table = _load_table(args.table)
    noise = _load_noise(args.noise)
    oracle = synthesize_gates(table)
    if noise is None:
        result = deutsch_jozsa(oracle, table.n, shots=args.shots, seed=args.seed)
        hist = result.histogram
    else:
        result = deutsch_jozsa(oracle, table.n)
        hist = sample_with_noise(dj_circuit(oracle), noise, args.shots, args.seed)
    classical = classical_baseline(table)
    report = RunReport(args.argv, args.seed, args.shots, hist, str(result.verdict),
                       result.first_register_outcome, result.oracle_queries,
                       classical.queries_used, result.zero_probability, noise)
    text = (f"verdict: {result.verdict}\n"
            f"outcome: {result.first_register_outcome}\n"
            f"P({'0' * table.n}): {result.zero_probability:.12g}\n"
            f"quantum_queries: {result.oracle_queries}\n"
            f"classical_queries: {classical.queries_used}\n"
            + format_histogram(hist))
    return report, text


def cmd_oracle(args) -> tuple[RunReport, str]:
    table = _load_table(args.table)
    oc = synthesize_gates(table)
    gates = [g.to_qasm() for g in oc.gate_list]
    perm = [int(v) for v in oc.permutation]
    report = RunReport(args.argv, extra={"n": oc.n, "ancilla": oc.ancilla,
                                         "permutation": perm, "gates": gates})
    width = oc.n + 1
    lines = [f"n={oc.n} ancilla=q[{oc.ancilla}]", "permutation (ancilla bit leftmost):"]
    lines += [f"  {k:0{width}b} -> {v:0{width}b}" for k, v in enumerate(perm)]
    lines.append("gates:")
    lines += gates or ["  (identity)"]
    return report, "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="djsim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"djsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--shots", type=int, default=8000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--noise", metavar="JSON", help="noise config file")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    p = sub.add_parser("run", help="execute an OpenQASM 2.0 file")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("dj", help="run Deutsch-Jozsa on a truth-table file")
    p.add_argument("table")
    common(p)
    p.set_defaults(func=cmd_dj)

    p = sub.add_parser("oracle", help="print the oracle synthesized from a truth table")
    p.add_argument("table")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--json", action="store_const", const="json", dest="format")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    args.argv = argv
    if getattr(args, "shots", 1) < 1:
        print("djsim: error: --shots must be positive", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "seed", 0) < 0:
        print("djsim: error: --seed must be non-negative", file=sys.stderr)
        return EXIT_USAGE

    start = time.perf_counter()
    try:
        report, text = args.func(args)
    except PromiseViolation as exc:
        print(f"djsim: promise violated: {exc}", file=sys.stderr)
        return EXIT_PROMISE
    except QasmError as exc:
        path = getattr(exc, "path", "<input>")
        for d in exc.diagnostics:
            print(f"{path}:{d}", file=sys.stderr)
        return EXIT_INVALID
    except DJSimError as exc:
        print(f"djsim: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report.wall_time_ms = round((time.perf_counter() - start) * 1000.0, 3)

    as_json = args.json if args.command != "oracle" else args.format == "json"
    out = report.to_json() if as_json else text
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(out)
        except OSError as exc:
            print(f"djsim: {args.out}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_INVALID
    else:
        sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
