"""Command-line surface: figure-data emitters and the verification suite.

Grammar: ``thermoquery <subcommand> [--param value]... --out PATH --format csv|json --seed INT``.
Exit codes: 0 success, 1 validation error, 2 verification failure.

Every output starts with a config echo (CSV comment lines / a JSON "config"
object) so runs are reproducible from their artifacts alone. All subcommands
are deterministic under a fixed seed and config; sweep rows are emitted in
canonical sorted order.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import sys
from typing import IO, Sequence

import numpy as np

from . import __version__
from .detuning import ExperimentConfig, bv3_sweep
from .problems import constant_functions, enumerate_balanced_functions
from .query import kickback_outcome
from .readout import (
    chernoff_stein_samples,
    crossover_analysis,
    distinguishability_report,
)
from .thermal import ThermalQubit, build_dj_oracle
from .verify import run_verification

__all__ = ["main", "DEFAULTS"]

DEFAULTS = {
    "seed": 1234,
    # Kickback figure (two-bit problem, probe gap 1).
    "kickback_n": 2,
    "kickback_gap_one": 1.0,
    "kickback_gap_zero": 0.5,
    "kickback_beta_m": (2.0, 1.0, 0.5),
    "kickback_beta_s": "0:2:41",
    "kickback_omega": 1.0,
    # Distinguishability grid; bounds chosen so the achievable threshold
    # spans [0, 0.5] over the default machine sizes.
    "disting_beta_m": 1.0,
    "disting_n": (2, 4),
    "disting_e1": "0.5:2.8:24",
    "disting_e2": "0.45:2.0:24",
    "disting_t": 0.2,
    # Sample-complexity table.
    "sample_delta": "0.01:0.2:20",
    "sample_t": "0.1,0.2,0.3,0.4,0.5,0.55,0.589",
    # Detuning sweep. The coupling sits well above the largest detuning so the
    # suppression factors stay close enough to 1 that they cannot invert the
    # partition-function ordering of the curves (which would make equal-weight
    # secrets cross).
    "detuning_gamma": (1.0, 1.13, 1.31),
    "detuning_epsilon": 0.05,
    "detuning_g": 4.0,
    "detuning_beta_m": 1.0,
    "detuning_beta_s": "0:3:61",
}

MIXED_QUERY_DIVERGENCE = math.log(4.0 / 3.0)


class CliError(ValueError):
    """Validation failure that should exit with code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: D102  (argparse hook)
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_values(text: str) -> list[float]:
    """Parse ``start:stop:count`` (inclusive linspace) or a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise ValueError
            return [float(v) for v in np.linspace(start, stop, count)]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise CliError(f"cannot parse value grid {text!r}; use start:stop:count or v1,v2,...")


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise CliError(f"cannot parse integer list {text!r}")


@contextlib.contextmanager
def _open_out(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as stream:
            yield stream


def _emit(stream: IO[str], fmt: str, config: dict, fieldnames: list[str], rows: list[dict]) -> None:
    if fmt == "json":
        json.dump({"version": __version__, "config": config, "rows": rows}, stream, indent=2)
        stream.write("\n")
        return
    stream.write(f"# thermoquery {__version__}\n")
    for key in sorted(config):
        stream.write(f"# {key} = {config[key]}\n")
    writer = csv.DictWriter(stream, fieldnames=fieldnames)
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if row[k] is None else row[k]) for k in fieldnames})


def cmd_dj_kickback(args: argparse.Namespace) -> int:
    beta_m_values = sorted(parse_values(args.beta_m))
    beta_s_values = parse_values(args.beta_s)
    if args.e1 <= 0 or args.e2 <= 0 or args.omega <= 0:
        raise CliError("gaps and omega must be positive")
    if args.n < 1:
        raise CliError("n must be >= 1")
    const0, const1 = constant_functions(args.n)
    balanced = next(enumerate_balanced_functions(args.n))
    cases = [("balanced", balanced), ("constant0", const0), ("constant1", const1)]
    rows = []
    for beta_m in beta_m_values:
        oracles = {
            name: build_dj_oracle(inst.function, args.e1, args.e2, beta_m)
            for name, inst in cases
        }
        for beta_s in beta_s_values:
            probe = ThermalQubit(args.omega, beta_s)
            for name in sorted(oracles):
                outcome = kickback_outcome(probe, oracles[name])
                rows.append(
                    {
                        "beta_M": beta_m,
                        "beta_S": beta_s,
                        "case": name,
                        "delta_p0": outcome.delta_p0,
                        "p0_after": outcome.p0_after,
                        "beta_S_prime": outcome.beta_after,
                    }
                )
    config = {
        "subcommand": "dj-kickback",
        "n": args.n,
        "E1": args.e1,
        "E2": args.e2,
        "omega": args.omega,
        "beta_M": beta_m_values,
        "beta_S": args.beta_s,
        "seed": args.seed,
    }
    with _open_out(args.out) as stream:
        _emit(stream, args.format, config,
              ["beta_M", "beta_S", "case", "delta_p0", "p0_after", "beta_S_prime"], rows)
    return 0


def cmd_distinguishability(args: argparse.Namespace) -> int:
    n_values = sorted(parse_int_list(args.n_qubits))
    e1_values = parse_values(args.e1_grid)
    e2_values = parse_values(args.e2_grid)
    if any(n < 2 or n % 2 for n in n_values):
        raise CliError("machine sizes must be even and >= 2")
    if any(v <= 0 for v in e1_values + e2_values):
        raise CliError("grid energies must be positive")
    if not args.t > 0:
        raise CliError("t must be positive")
    rows = []
    for n in n_values:
        for e1 in sorted(e1_values):
            for e2 in sorted(e2_values):
                if e1 < e2:
                    continue
                report = distinguishability_report(e1, e2, args.beta_m, n, args.t)
                rows.append(
                    {
                        "N": n,
                        "E1": e1,
                        "E2": e2,
                        "lhs": report.lhs,
                        "chi": report.chi,
                        "satisfied": report.satisfied,
                    }
                )
    config = {
        "subcommand": "distinguishability",
        "beta_M": args.beta_m,
        "N": n_values,
        "E1_grid": args.e1_grid,
        "E2_grid": args.e2_grid,
        "t": args.t,
        "seed": args.seed,
    }
    with _open_out(args.out) as stream:
        _emit(stream, args.format, config, ["N", "E1", "E2", "lhs", "chi", "satisfied"], rows)
    return 0


def cmd_sample_complexity(args: argparse.Namespace) -> int:
    deltas = parse_values(args.delta_grid)
    ts = parse_values(args.t_grid)
    table = crossover_analysis(deltas, ts)
    rows = []
    for row in table:
        rows.append(
            {
                "delta": row.delta,
                "t": row.t,
                "n_star": row.n_star,
                "k_classical": row.k_classical,
                "n_mixed_query": chernoff_stein_samples(row.delta, MIXED_QUERY_DIVERGENCE),
                "n_crossover": row.n_crossover,
                "thermal_beats_probabilistic": row.thermal_beats_probabilistic,
            }
        )
    config = {
        "subcommand": "sample-complexity",
        "delta_grid": args.delta_grid,
        "t_grid": args.t_grid,
        "mixed_query_divergence": MIXED_QUERY_DIVERGENCE,
        "seed": args.seed,
    }
    fields = ["delta", "t", "n_star", "k_classical", "n_mixed_query",
              "n_crossover", "thermal_beats_probabilistic"]
    with _open_out(args.out) as stream:
        _emit(stream, args.format, config, fields, rows)
    return 0


def cmd_detuning_sweep(args: argparse.Namespace) -> int:
    gammas = parse_values(args.gamma)
    if len(gammas) != 3:
        raise CliError("exactly three machine gaps are required")
    beta_s_values = parse_values(args.beta_s)
    try:
        config_obj = ExperimentConfig(
            machine_gaps=tuple(gammas),
            bias=args.epsilon,
            coupling=args.g,
            probe_gap=args.omega,
            machine_inverse_temperature=args.beta_m,
        )
    except ValueError as exc:
        raise CliError(str(exc))
    sweep = bv3_sweep(config_obj, sorted(beta_s_values))
    rows = [
        {
            "secret": p.secret,
            "beta_S": p.beta_s,
            "delta_s": p.delta_s,
            "eta": p.eta,
            "beta_S_prime": p.beta_s_prime,
        }
        for p in sweep.points
    ]
    config = {
        "subcommand": "detuning-sweep",
        "gamma": gammas,
        "epsilon": args.epsilon,
        "g": args.g,
        "omega": config_obj.omega,
        "beta_M": args.beta_m,
        "beta_S": args.beta_s,
        "min_pairwise_separation": sweep.min_pairwise_separation,
        "seed": args.seed,
    }
    with _open_out(args.out) as stream:
        _emit(stream, args.format, config,
              ["secret", "beta_S", "delta_s", "eta", "beta_S_prime"], rows)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_verification(
        max_dj_n=args.max_n,
        max_bv_n=args.bv_max_n,
        tuples_per_instance=args.trials,
        seed=args.seed,
    )
    for line in report.lines():
        print(line)
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as stream:
            json.dump({"version": __version__, "seed": args.seed, **report.to_dict()}, stream, indent=2)
            stream.write("\n")
    return 0 if report.passed else 2


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, help="output path ('-' or omitted for stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--seed", type=int, default=DEFAULTS["seed"])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="thermoquery",
                     description="Thermal-machine oracle queries: figure data and verification")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("dj-kickback", help="post-query temperature curves per promise class")
    p.add_argument("--n", type=int, default=DEFAULTS["kickback_n"])
    p.add_argument("--e1", type=float, default=DEFAULTS["kickback_gap_one"],
                   help="machine gap encoding output 1")
    p.add_argument("--e2", type=float, default=DEFAULTS["kickback_gap_zero"],
                   help="machine gap encoding output 0")
    p.add_argument("--beta-m", default=",".join(str(b) for b in DEFAULTS["kickback_beta_m"]),
                   help="machine inverse temperatures (list or grid)")
    p.add_argument("--beta-s", default=DEFAULTS["kickback_beta_s"],
                   help="probe inverse-temperature grid")
    p.add_argument("--omega", type=float, default=DEFAULTS["kickback_omega"])
    _add_common(p)
    p.set_defaults(func=cmd_dj_kickback)

    p = sub.add_parser("distinguishability", help="machine ground-population gap over an energy grid")
    p.add_argument("--beta-m", type=float, default=DEFAULTS["disting_beta_m"])
    p.add_argument("--n-qubits", default=",".join(str(n) for n in DEFAULTS["disting_n"]),
                   help="machine sizes (comma list, even)")
    p.add_argument("--e1-grid", default=DEFAULTS["disting_e1"])
    p.add_argument("--e2-grid", default=DEFAULTS["disting_e2"])
    p.add_argument("--t", type=float, default=DEFAULTS["disting_t"])
    _add_common(p)
    p.set_defaults(func=cmd_distinguishability)

    p = sub.add_parser("sample-complexity", help="thermal vs classical sample-count table")
    p.add_argument("--delta-grid", default=DEFAULTS["sample_delta"])
    p.add_argument("--t-grid", default=DEFAULTS["sample_t"])
    _add_common(p)
    p.set_defaults(func=cmd_sample_complexity)

    p = sub.add_parser("detuning-sweep", help="per-secret detuned temperature curves")
    p.add_argument("--gamma", default=",".join(str(g) for g in DEFAULTS["detuning_gamma"]),
                   help="three machine gaps")
    p.add_argument("--epsilon", type=float, default=DEFAULTS["detuning_epsilon"])
    p.add_argument("--g", type=float, default=DEFAULTS["detuning_g"], help="coupling strength")
    p.add_argument("--omega", type=float, default=None,
                   help="probe gap (defaults to the unbiased total machine gap)")
    p.add_argument("--beta-m", type=float, default=DEFAULTS["detuning_beta_m"])
    p.add_argument("--beta-s", default=DEFAULTS["detuning_beta_s"])
    _add_common(p)
    p.set_defaults(func=cmd_detuning_sweep)

    p = sub.add_parser("verify", help="analytic formulas vs the exact diagonal simulator")
    p.add_argument("--max-n", type=int, default=3, help="largest Deutsch-Jozsa bit count")
    p.add_argument("--bv-max-n", type=int, default=6, help="largest secret-string length")
    p.add_argument("--trials", type=int, default=100, help="random tuples per instance")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        print(f"thermoquery: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
