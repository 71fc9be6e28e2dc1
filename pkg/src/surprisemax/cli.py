"""Command-line front end.

Subcommands: ``solve``, ``eval``, ``verify``, ``simulate``, ``table``.
Results go to stdout, diagnostics to stderr, and identical invocations
produce identical bytes.  Exit codes: 0 success, 1 usage error,
2 verification mismatch, 3 input parse error.

Floats are rendered as the shortest decimal string that parses back to the
same binary64 value, with a bare integer form for whole numbers, so ``1.0``
prints as ``1``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .objective import as_probability_vector, gradient_sm2, objective_values, tail_masses
from .oracles import (
    GRID_POINT_CAP,
    AscentConfig,
    GridSpec,
    SearchSense,
    grid_search,
    ascent_optimize,
)
from .simulate import SimulationConfig, estimate_expected_surprise
from .solver import SolveResult, rollout, stationarity_residual, telescope_residual

__all__ = ["main", "format_float"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_PARSE = 3

_SEED_MASK = 0xFFFFFFFFFFFFFFFF


def format_float(x: float) -> str:
    """Shortest round-trip decimal, whole numbers without the trailing .0"""
    text = repr(float(x))
    if text.endswith(".0"):
        return text[:-2]
    return text


class _UsageError(Exception):
    pass


class _ParseFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags by default; the contract here says 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# input parsing

def _parse_single_days(text: str) -> int:
    try:
        m = int(text)
    except ValueError:
        raise _UsageError(f"invalid --days value {text!r}, expected an integer")
    if m < 1:
        raise _UsageError(f"--days must be at least 1, got {m}")
    return m


def _parse_days_span(text: str) -> tuple[int, int]:
    """Either a single integer or an inclusive span like ``2..8``."""
    if ".." in text:
        first, _, last = text.partition("..")
        try:
            lo, hi = int(first), int(last)
        except ValueError:
            raise _UsageError(f"invalid --days span {text!r}, expected like 2..8")
    else:
        lo = hi = _parse_single_days(text)
    if lo < 1:
        raise _UsageError(f"--days must start at 1 or later, got {lo}")
    if hi < lo:
        raise _UsageError(f"--days span {text!r} is empty")
    return lo, hi


def _parse_seed(value: int) -> int:
    if not 0 <= value <= _SEED_MASK:
        raise _UsageError(f"--seed {value} is not an unsigned 64-bit integer")
    return value


def load_distribution(path: str) -> np.ndarray:
    """Read a schedule from a JSON array or a one-number-per-line file.

    The format is sniffed from the first non-whitespace byte: ``[`` means
    JSON.  ``-`` reads stdin.  Any failure raises with the offending line
    or element named.
    """
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise _ParseFailure(f"cannot read {path}: {exc.strerror or exc}")
    stripped = text.strip()
    if not stripped:
        raise _ParseFailure(f"{path}: empty input")
    if stripped.startswith("["):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise _ParseFailure(
                f"{path}: invalid JSON: {exc.msg} (line {exc.lineno} column {exc.colno})"
            )
        if not isinstance(data, list):
            raise _ParseFailure(f"{path}: expected a JSON array of numbers")
        values = []
        for i, item in enumerate(data, 1):
            if isinstance(item, bool) or not isinstance(item, (int, float)):
                raise _ParseFailure(f"{path}: element {i} is not a number: {item!r}")
            values.append(float(item))
    else:
        values = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise _ParseFailure(f"{path}: line {lineno}: not a number: {line!r}")
    try:
        return as_probability_vector(values)
    except ValueError as exc:
        raise _ParseFailure(f"{path}: {exc}")


# ---------------------------------------------------------------------------
# rendering

def _render_solve_csv(result: SolveResult) -> str:
    lines = ["j,gamma,hazard,p,remaining_before"]
    for row in result.policy.rows:
        lines.append(
            ",".join(
                (
                    str(row.day),
                    format_float(row.gamma),
                    format_float(row.hazard),
                    format_float(row.allocation),
                    format_float(row.remaining_before),
                )
            )
        )
    return "\n".join(lines) + "\n"


def _render_solve_json(result: SolveResult) -> str:
    gamma = result.gamma
    gammas = ", ".join(format_float(gamma[j]) for j in range(1, gamma.m + 1))
    ps = ", ".join(format_float(x) for x in result.p)
    obj = result.objective
    return (
        f'{{"m": {result.m}, '
        f'"gamma0": {format_float(gamma[0])}, '
        f'"gamma": [{gammas}], '
        f'"p": [{ps}], '
        f'"objective": {{"sm1": {format_float(obj.sm1)}, '
        f'"sm2": {format_float(obj.sm2)}, '
        f'"expected_surprise": {format_float(obj.expected_surprise)}}}, '
        f'"value_at_root": {format_float(result.value_at_root)}}}'
    )


def _render_solve(result: SolveResult, fmt: str) -> str:
    if fmt == "csv":
        return _render_solve_csv(result)
    return _render_solve_json(result) + "\n"


def _render_pairs(pairs: list[tuple[str, str]], fmt: str) -> str:
    if fmt == "csv":
        return "\n".join(["field,value"] + [f"{k},{v}" for k, v in pairs]) + "\n"
    body = ", ".join(f'"{k}": {v}' for k, v in pairs)
    return "{" + body + "}\n"


# ---------------------------------------------------------------------------
# subcommands

def _cmd_solve(args) -> int:
    m = _parse_single_days(args.days)
    sys.stdout.write(_render_solve(rollout(m), args.format))
    return EXIT_OK


def _cmd_table(args) -> int:
    lo, hi = _parse_days_span(args.days)
    blocks = [_render_solve(rollout(m), args.format) for m in range(lo, hi + 1)]
    if args.format == "csv":
        # blank line between per-horizon tables
        sys.stdout.write("\n\n".join(block.rstrip("\n") for block in blocks) + "\n")
    else:
        sys.stdout.write("".join(blocks))
    return EXIT_OK


def _cmd_eval(args) -> int:
    v = load_distribution(args.input)
    obj = objective_values(v)
    tails = tail_masses(v)
    if args.format == "csv":
        pairs = [
            ("m", str(v.size)),
            ("sm1", format_float(obj.sm1)),
            ("sm2", format_float(obj.sm2)),
            ("expected_surprise", format_float(obj.expected_surprise)),
        ]
        pairs += [(f"p_{j + 1}", format_float(v[j])) for j in range(v.size)]
        pairs += [(f"tail_{j + 1}", format_float(tails[j])) for j in range(v.size)]
        sys.stdout.write(_render_pairs(pairs, "csv"))
    else:
        ps = ", ".join(format_float(x) for x in v)
        ts = ", ".join(format_float(x) for x in tails)
        sys.stdout.write(
            f'{{"m": {v.size}, "p": [{ps}], "tail": [{ts}], '
            f'"objective": {{"sm1": {format_float(obj.sm1)}, '
            f'"sm2": {format_float(obj.sm2)}, '
            f'"expected_surprise": {format_float(obj.expected_surprise)}}}}}\n'
        )
    return EXIT_OK


def _cmd_simulate(args) -> int:
    m = _parse_single_days(args.days)
    if args.samples < 1:
        raise _UsageError(f"--samples must be at least 1, got {args.samples}")
    seed = _parse_seed(args.seed)
    result = rollout(m)
    sim = estimate_expected_surprise(result.p, SimulationConfig(samples=args.samples, seed=seed))
    analytic = result.gamma[0] - 1.0
    z_gap = (sim.mean - analytic) / sim.std_error if sim.std_error > 0.0 else 0.0
    pairs = [
        ("m", str(m)),
        ("samples", str(sim.samples)),
        ("seed", str(sim.seed)),
        ("mean", format_float(sim.mean)),
        ("std_error", format_float(sim.std_error)),
        ("analytic", format_float(analytic)),
        ("z_gap", format_float(z_gap)),
    ]
    sys.stdout.write(_render_pairs(pairs, args.format))
    return EXIT_OK


class _VerifyFailed(Exception):
    def __init__(self, m: int, label: str):
        super().__init__(f"m={m} {label}")
        self.m = m
        self.label = label


# residuals are checked at these remaining-mass levels
_VERIFY_MASSES = (0.1, 0.5, 1.0)
_OBJECTIVE_TOL = 1e-10
_RESIDUAL_TOL = 1e-12
_SPREAD_TOL = 1e-9


def _cmd_verify(args) -> int:
    lo, hi = _parse_days_span(args.days)
    seed = _parse_seed(args.seed)
    if not args.tol > 0.0:
        raise _UsageError(f"--tol must be positive, got {args.tol}")

    lines: list[str] = []
    max_ascent_gap = 0.0

    def check(m: int, label: str, value: float, tol: float) -> None:
        ok = value <= tol
        lines.append(
            f"m={m} {label} gap={format_float(value)} tol={format_float(tol)} "
            + ("ok" if ok else "FAIL")
        )
        if not ok:
            raise _VerifyFailed(m, label)

    try:
        for m in range(lo, hi + 1):
            result = rollout(m)
            report = ascent_optimize(m, AscentConfig(seed=seed), tolerance=args.tol)
            max_ascent_gap = max(max_ascent_gap, report.linf_gap)
            check(m, "ascent-linf", report.linf_gap, args.tol)
            check(
                m,
                "ascent-objective",
                abs(report.best_value - result.value_at_root),
                _OBJECTIVE_TOL,
            )
            if 2 <= m <= 3:
                resolution = args.grid if args.grid is not None else (10_000 if m == 2 else 1_000)
                if resolution < 2:
                    raise _UsageError(f"--grid must be at least 2, got {resolution}")
                if math.comb(resolution + m - 1, m - 1) > GRID_POINT_CAP:
                    raise _UsageError(
                        f"--grid {resolution} makes more than {GRID_POINT_CAP} points for m={m}"
                    )
                grid = grid_search(m, GridSpec(resolution, SearchSense.MINIMIZE_SM2))
                check(m, f"grid-linf N={resolution}", grid.linf_gap, grid.tolerance)
            if m >= 2:
                residual = max(
                    abs(stationarity_residual(j, r, result.gamma))
                    for j in range(1, m)
                    for r in _VERIFY_MASSES
                )
                check(m, "stationarity", residual, _RESIDUAL_TOL)
            residual = max(
                abs(telescope_residual(result.gamma, k)) for k in range(1, m + 1)
            )
            check(m, "telescope", residual, _RESIDUAL_TOL * m)
            gradient = gradient_sm2(result.p)
            check(m, "gradient-spread", float(gradient.max() - gradient.min()), _SPREAD_TOL)
    except _VerifyFailed as failure:
        lines.append(f"verify: FAIL first failure m={failure.m} {failure.label}")
        sys.stdout.write("\n".join(lines) + "\n")
        return EXIT_VERIFY

    lines.append(
        f"verify: PASS days={lo}..{hi} max_ascent_gap={format_float(max_ascent_gap)}"
    )
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# wiring

def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="surprisemax", description="Surprise-maximizing schedules.")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    solve = sub.add_parser("solve", help="closed-form schedule for one horizon")
    solve.add_argument("--days", required=True, help="number of days, at least 1")
    solve.add_argument("--format", choices=("csv", "json"), default="json")
    solve.set_defaults(func=_cmd_solve)

    table = sub.add_parser("table", help="solve over a span of horizons")
    table.add_argument("--days", required=True, help="single value or span like 1..8")
    table.add_argument("--format", choices=("csv", "json"), default="json")
    table.set_defaults(func=_cmd_table)

    ev = sub.add_parser("eval", help="score a schedule read from a file")
    ev.add_argument("--input", required=True, help="JSON array or one number per line; - for stdin")
    ev.add_argument("--format", choices=("csv", "json"), default="json")
    ev.set_defaults(func=_cmd_eval)

    verify = sub.add_parser("verify", help="check the closed form against the oracles")
    verify.add_argument("--days", required=True, help="single value or span like 2..8")
    verify.add_argument("--grid", type=int, default=None, help="override grid resolution")
    verify.add_argument("--tol", type=float, default=1e-6, help="ascent agreement tolerance")
    verify.add_argument("--seed", type=int, default=0, help="ascent restart seed")
    verify.set_defaults(func=_cmd_verify)

    simulate = sub.add_parser("simulate", help="Monte Carlo check of the expected surprise")
    simulate.add_argument("--days", required=True, help="number of days, at least 1")
    simulate.add_argument("--samples", type=int, default=1_000_000)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--format", choices=("csv", "json"), default="json")
    simulate.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"surprisemax: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _ParseFailure as exc:
        print(f"surprisemax: error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
