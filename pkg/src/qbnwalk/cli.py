"""Command line interface: ``qbnwalk walk | spectrum | symmetry``.

Exit codes: 0 success, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .analysis import (
    check_operator_identity,
    check_parity_sector_symmetry,
    check_time_reversal,
    distribution,
)
from .errors import QBNError, SupportError
from .operators import DENSE_LEVEL_LIMIT, TruncatedOperator, dense_matrix, write_matrix_csv
from .spectral import LEVEL_LIMIT, spectrum_fill_report
from .statespace import basis_state, loads_state, random_state
from .vertexspace import WIDTH, format_vertex, parse_vertex
from .weights import Weight, parse_weight

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_WEIGHT = "geometric:0.5"


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(self.prog, message)


def _times(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qbnwalk", description="Quantum walk on the infinite hypercube.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--weight", default=DEFAULT_WEIGHT,
                       help="geometric:<r>[:<a>] | explicit:v1,v2,... | powerlaw:<p>[:<a>]")
        p.add_argument("--modes", type=int, default=8, help="number of modes n+1 (1..64)")
        p.add_argument("--out", help="write output to this file instead of stdout")
        p.add_argument("--seed", type=int, default=42)

    walk = sub.add_parser("walk", help="probability distribution at one or more times")
    common(walk)
    walk.add_argument("--time", type=float, default=None)
    walk.add_argument("--times", type=_times, default=None)
    walk.add_argument("--initial", nargs="+", default=["empty"], metavar="SPEC",
                      help="empty | vertex {..} | file state.json")
    walk.add_argument("--format", choices=["json", "csv"], default="json")
    walk.add_argument("--top", type=int, default=None)

    spec = sub.add_parser("spectrum", help="Weyl residuals and eigenvalue grid report")
    common(spec)
    spec.add_argument("--sigma", action="append", default=None, metavar="{..}")
    spec.add_argument("--dump-matrix", default=None, metavar="FILE.csv")
    spec.add_argument("--format", choices=["json", "text"], default="json")

    sym = sub.add_parser("symmetry", help="time-reversal and parity symmetry checks")
    common(sym)
    sym.add_argument("--check", default="all",
                     choices=["time_reversal", "parity_even", "parity_odd", "operator", "all"])
    sym.add_argument("--times", type=_times, default=[0.7, 2.3])
    sym.add_argument("--trials", type=int, default=10)
    sym.add_argument("--initial", nargs="+", default=None, metavar="SPEC")
    sym.add_argument("--format", choices=["json", "text"], default="json")
    return parser


def _weight(args) -> Weight:
    try:
        return Weight(parse_weight(args.weight))
    except QBNError as exc:
        raise UsageError("--weight", str(exc)) from None


def _level(args, limit: int = WIDTH - 1) -> int:
    if not 1 <= args.modes <= WIDTH:
        raise UsageError("--modes", f"must be between 1 and {WIDTH}, got {args.modes}")
    n = args.modes - 1
    if n > limit:
        raise UsageError("--modes", f"at most {limit + 1} modes supported here, got {args.modes}")
    return n


def _initial(tokens: list[str], n: int):
    kind = tokens[0]
    try:
        if kind == "empty" and len(tokens) == 1:
            return basis_state(0)
        if kind == "vertex" and len(tokens) == 2:
            state = basis_state(parse_vertex(tokens[1]))
        elif kind == "file" and len(tokens) == 2:
            state = loads_state(Path(tokens[1]).read_text())
        elif len(tokens) == 1 and kind.startswith("{"):
            state = basis_state(parse_vertex(kind))
        else:
            raise UsageError("--initial", f"expected empty | vertex {{..}} | file PATH, got {' '.join(tokens)!r}")
    except (QBNError, OSError) as exc:
        raise UsageError("--initial", str(exc)) from None
    if not state.is_supported_in(n):
        raise UsageError("--initial", f"state support exceeds the {n + 1} simulated modes")
    return state


def _flag_for(exc: QBNError) -> str:
    # support blow-up is a mode-count problem; bad norm or sector is the initial state's
    return "--modes" if isinstance(exc, SupportError) else "--initial"


def _emit(text: str, args, stdout) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)


def run_walk(args, stdout) -> int:
    w = _weight(args)
    n = _level(args)
    times = list(args.times) if args.times is not None else []
    if args.time is not None:
        times.insert(0, args.time)
    if not times:
        times = [1.0]
    if args.top is not None and args.top < 0:
        raise UsageError("--top", "must be nonnegative")
    xi0 = _initial(args.initial, n)
    try:
        dists = [distribution(w, n, t, xi0) for t in times]
    except QBNError as exc:
        raise UsageError(_flag_for(exc), str(exc)) from None

    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for d in dists:
            buf.write(f"# time={d.time!r} modes={n + 1} weight={w.label} mass={d.mass!r} "
                      f"truncation_bound={d.truncation_bound!r}\n")
            writer.writerow(["vertex", "probability", "re", "im"])
            for v, p, a in d.ranked(args.top):
                writer.writerow([format_vertex(v), repr(p), repr(a.real), repr(a.imag)])
        _emit(buf.getvalue(), args, stdout)
    else:
        payload = {
            "weight": w.label,
            "modes": n + 1,
            "results": [
                {
                    "time": d.time,
                    "mass": d.mass,
                    "truncation_bound": d.truncation_bound,
                    "support": int(d.vertices.size),
                    "entries": [
                        {"vertex": format_vertex(v), "probability": p, "re": a.real, "im": a.imag}
                        for v, p, a in d.ranked(args.top)
                    ],
                }
                for d in dists
            ],
        }
        _emit(json.dumps(payload, indent=2) + "\n", args, stdout)
    return EXIT_OK


def run_spectrum(args, stdout) -> int:
    w = _weight(args)
    n = _level(args, LEVEL_LIMIT)
    sigmas = None
    if args.sigma:
        try:
            sigmas = [parse_vertex(s) for s in args.sigma]
        except QBNError as exc:
            raise UsageError("--sigma", str(exc)) from None
    if args.dump_matrix:
        if n > DENSE_LEVEL_LIMIT:
            raise UsageError("--dump-matrix", f"dense export needs at most {DENSE_LEVEL_LIMIT + 1} modes")
        write_matrix_csv(dense_matrix(TruncatedOperator(w, n)), args.dump_matrix)
    report = spectrum_fill_report(w, n, sigmas, seed=args.seed)
    if args.format == "json":
        _emit(json.dumps(report.to_dict(), indent=2) + "\n", args, stdout)
    else:
        lines = [f"weight {report.weight}  modes {n + 1}  application level {report.application_level}"]
        for e in report.entries:
            lines.append(f"  sigma {e.sigma:<24} mu {e.mu:.12g}  residual {e.residual:.3e}"
                         f"  bound {e.bound:.3e}  {'ok' if e.passed else 'FAIL'}")
        lines.append(f"  grid [{report.grid_min:.12g}, {report.grid_max:.12g}]  max gap {report.grid_max_gap:.6g}"
                     f"  eigen residual {report.max_eigen_residual:.3e}")
        if report.ideal_gap_ok is not None:
            lines.append(f"  reference gap {report.ideal_gap_expected:.6g}: {'ok' if report.ideal_gap_ok else 'FAIL'}")
        lines.append(f"verdict {'pass' if report.passed else 'fail'}")
        _emit("\n".join(lines) + "\n", args, stdout)
    return EXIT_OK if report.passed else EXIT_FAIL


def run_symmetry(args, stdout) -> int:
    w = _weight(args)
    n = _level(args)
    if args.trials < 1:
        raise UsageError("--trials", "must be at least 1")
    given = _initial(args.initial, n) if args.initial else None
    checks = ["time_reversal", "parity_even", "parity_odd", "operator"] if args.check == "all" else [args.check]
    rng = np.random.default_rng(args.seed)
    reports = []
    try:
        for name in checks:
            if name == "time_reversal":
                xi0 = given if given is not None else random_state(n, rng)
                reports.append(check_time_reversal(w, n, xi0, args.times, seed=args.seed))
            elif name in ("parity_even", "parity_odd"):
                sector = name.split("_")[1]
                xi0 = given if given is not None else random_state(n, rng, sector=sector)
                reports.append(check_parity_sector_symmetry(w, n, xi0, sector, args.times, seed=args.seed))
            else:
                reports.append(check_operator_identity(w, n, args.times, args.trials, seed=args.seed))
    except QBNError as exc:
        raise UsageError(_flag_for(exc), str(exc)) from None

    if args.format == "json":
        body = [r.to_dict() for r in reports]
        _emit(json.dumps(body if len(body) > 1 else body[0], indent=2) + "\n", args, stdout)
    else:
        lines = [f"{r.check:<26} max deviation {r.max_deviation:.3e}  tol {r.tolerance:.0e}  {r.verdict}"
                 for r in reports]
        _emit("\n".join(lines) + "\n", args, stdout)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        runner = {"walk": run_walk, "spectrum": run_spectrum, "symmetry": run_symmetry}[args.command]
        return runner(args, stdout)
    except UsageError as exc:
        print(f"qbnwalk: error: {exc}", file=stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
