"""Command-line front end.

    thermoscale sweep --config run.cfg --out results/
    thermoscale check --seed 42

Exit codes: 0 success, 1 configuration error, 2 a numerical invariant failed.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import math
import os
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .experiments import (
    FIGURES,
    ExperimentConfig,
    check_invariants,
    emit_figure_data,
    oracle_suite,
    run_realization,
    run_sweep,
)

log = logging.getLogger("thermoscale")

SUBCOMMAND_FIGURES = {
    "scaling": ("fig1",),
    "overlaps": ("fig2",),
    "distance": ("fig3",),
    "spectral-temp": ("fig4",),
}

EXIT_OK, EXIT_CONFIG, EXIT_INVARIANT = 0, 1, 2


class InvariantError(RuntimeError):
    pass


def format_value(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return format(v, ".17g")
    return str(v)


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])


PLOT_SCRIPTS = {
    "fig1": """set datafile separator ','
set key autotitle columnhead
set xlabel 'N'
set ylabel 'I / dE'
plot 'fig1.csv' using 2:3 with points pt 7 title 'ratio', \\
     '' using 2:4 with linespoints title '1/sqrt(N)'
""",
    "fig2": """set datafile separator ','
set key autotitle columnhead
set xlabel 'x'
set ylabel 'w eta'
plot 'fig2.csv' using 2:3 with dots title 'w eta', \\
     '' using 2:4 with dots title 'envelope'
""",
    "fig3": """set datafile separator ','
set key autotitle columnhead
set xlabel 'N'
set ylabel 'dist'
set cblabel 'beta*lambda'
plot 'fig3.csv' using 2:4:3 with points pt 7 palette title 'dist'
""",
    "fig4": """set datafile separator ','
set key autotitle columnhead
set xlabel 'N'
set ylabel 'beta_spec / beta'
plot 'fig4.csv' using 2:4 with points pt 7 title 'beta_spec / beta'
""",
}


def write_plot_scripts(out: Path, figures) -> None:
    for fig in figures:
        (out / f"{fig}.gp").write_text(PLOT_SCRIPTS[fig])


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("THERMOSCALE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"THERMOSCALE_THREADS must be an integer, got {env!r}") from None
    return 1


def _config(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    overrides = {}
    if args.seed is not None:
        overrides["base_seed"] = args.seed
    if args.realization is not None:
        overrides["fig2_realization"] = args.realization
    try:
        return dataclasses.replace(config, **overrides)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thermoscale", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("scaling", "overlaps", "distance", "spectral-temp", "sweep", "check"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="experiment config file (key = value)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, help="override base_seed")
        p.add_argument("--threads", type=int, help="worker threads (default $THERMOSCALE_THREADS or 1)")
        p.add_argument("--realization", type=int, help="realization shown in fig2")
        if name == "sweep":
            p.add_argument("--figure", action="append", choices=FIGURES,
                           help="only write these figures (repeatable)")
    return parser


def _run(args) -> int:
    config = _config(args)
    threads = _threads(args)
    out = Path(args.out)

    if args.command == "check":
        seed = config.base_seed if args.seed is None else args.seed
        failed = False
        for name, (residual, tol) in oracle_suite(config, seed).items():
            ok = residual < tol
            failed |= not ok
            print(f"{name:24s} max residual {residual:.3e}  tol {tol:.0e}  {'ok' if ok else 'FAIL'}")
        if failed:
            raise InvariantError("oracle suite residual above tolerance")
        return EXIT_OK

    out.mkdir(parents=True, exist_ok=True)
    if args.command == "overlaps":
        result = run_realization(config, config.fig2_realization, keep_profiles=True)
        write_csv(out / "fig2.csv", *emit_figure_data([result], "fig2"))
        write_plot_scripts(out, ["fig2"])
        return EXIT_OK

    sweep = run_sweep(config, threads=threads)
    if args.command == "sweep":
        figures = args.figure or FIGURES
    else:
        figures = SUBCOMMAND_FIGURES[args.command]
    for fig in figures:
        write_csv(out / f"{fig}.csv", *emit_figure_data(sweep, fig))
    write_plot_scripts(out, figures)
    if args.command == "sweep":
        write_csv(out / "summary.csv", ("name", "N", "beta_lambda", "value"), sweep.summary.rows())
    breaches = check_invariants(sweep.summary)
    if breaches:
        raise InvariantError("; ".join(breaches))
    return EXIT_OK


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; report them as configuration errors
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantError as exc:
        print(f"invariant failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


def main() -> None:
    sys.exit(run_cli())
