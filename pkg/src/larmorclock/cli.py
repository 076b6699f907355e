"""Command-line front end.

    larmorclock sweep   [--config F] [--set k=v ...] [--out F]
    larmorclock figure  {2,3a,3b} [...]
    larmorclock dimer   [...]          (--out writes the first hit as JSON)
    larmorclock compare [...]

Exit codes: 0 success, 2 config error, 3 numerical non-convergence,
4 invariant violation.
"""
from __future__ import annotations

import argparse
import json
import sys

from .config import load_config
from .datasets import (FIGURE_COLUMNS, SWEEP_COLUMNS, compare_rows, figure_rows, fmt, format_table,
                       grid, scan_dimer, sweep_rows, write_csv)
from .errors import ConfigError, ConvergenceError, InvariantViolation, ProfileError

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_INVARIANT = 0, 2, 3, 4


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_sweep(cfg, args):
    _emit(write_csv(SWEEP_COLUMNS, sweep_rows(cfg), cfg["output.digits"]), args.out)


def cmd_figure(cfg, args):
    _emit(write_csv(FIGURE_COLUMNS, figure_rows(args.which, cfg), cfg["output.digits"]), args.out)


def cmd_dimer(cfg, args):
    gammas = grid(cfg["scan.gamma_min"], cfg["scan.gamma_max"], cfg["scan.gamma_count"])
    energies = grid(cfg["scan.e_min"], cfg["scan.e_max"], cfg["scan.e_count"])
    scan = scan_dimer(gammas, energies, cfg["dimer.d"], cfg["dimer.ratio"], cfg["fd.steps"], cfg["fd.tol"])
    d = cfg["output.digits"]
    lines = [f"delta dimer scan: d = {fmt(scan.d, d)}, gamma_right/gamma = {fmt(scan.ratio, d)}",
             f"points evaluated: {scan.evaluated}, skipped (non-convergent): {scan.skipped}"]
    if scan.first is None:
        lines.append("no negativity in range")
    else:
        hit = scan.first
        lines.append(f"negative naive reflection times: {len(scan.hits)}")
        lines.append("first hit:")
        lines.extend(f"  {k} = {fmt(v, d)}" for k, v in hit.items())
        worst = min(scan.hits, key=lambda h: h["tau_y_reflection_naive"])
        lines.append(f"most negative: tau_y_reflection_naive = {fmt(worst['tau_y_reflection_naive'], d)} "
                     f"at gamma = {fmt(worst['gamma'], d)}, E = {fmt(worst['E'], d)}")
        if args.out is not None:
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(hit, fh, indent=2, sort_keys=True)
                fh.write("\n")
            lines.append(f"fixture written to {args.out}")
    sys.stdout.write("\n".join(lines) + "\n")


def cmd_compare(cfg, args):
    head, regime, rows = compare_rows(cfg)
    _emit(format_table(head, regime, rows, cfg["output.digits"]), args.out)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key=value configuration file")
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--set", metavar="KEY=VALUE", action="append", default=[], dest="overrides",
                        help="override a configuration key (repeatable)")
    p = argparse.ArgumentParser(prog="larmorclock", description="Larmor-clock sojourn times for 1D barriers.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common], help="CSV sweep over v0, k0l, E or the FD step")
    fig = sub.add_parser("figure", parents=[common], help="CSV dataset for a normalised-time curve")
    fig.add_argument("which", choices=("2", "3a", "3b"))
    sub.add_parser("dimer", parents=[common], help="scan a delta dimer for negative naive reflection times")
    sub.add_parser("compare", parents=[common], help="table of all times at one point")
    return p


COMMANDS = {"sweep": cmd_sweep, "figure": cmd_figure, "dimer": cmd_dimer, "compare": cmd_compare}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.overrides)
        COMMANDS[args.command](cfg, args)
    except (ConfigError, ProfileError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
