"""Command line entry point: ``python -m avalanche1d [config] [flags]``.

Exit codes: 0 success, 1 scheme error, 2 config error, 3 a diagnostic
check failed.
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .errors import AvalancheError, ConfigError
from .harness import (
    Experiment,
    RunError,
    RunReport,
    Scheme,
    config_from_mapping,
    parse_config_text,
    run,
    runout_diagnostics,
)

EXIT_OK, EXIT_SCHEME, EXIT_CONFIG, EXIT_DIAGNOSTIC = 0, 1, 2, 3

# flag name -> config key
FLAGS = {
    "experiment": "experiment",
    "scheme": "scheme",
    "recon": "recon",
    "n": "n",
    "cfl": "cfl",
    "dt": "dt",
    "t_end": "t_end",
    "out": "out",
    "seed": "seed",
    "margin_order": "margin_order",
    "mu": "mu",
}


def _fmt(v) -> str:
    if v is None:
        return ""
    return format(float(v), ".17g")


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def profile_name(t: float) -> str:
    """Checkpoint file name; the number is the time in hundredths."""
    return f"profile_t{int(round(t * 100)):04d}.csv"


def write_report(report: RunReport, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for c in report.checkpoints:
        _write_csv(out / profile_name(c.t), ("x", "h", "u", "m"), zip(c.x, c.h, c.u, c.m))
    _write_csv(out / "margins.csv", ("t", "x_tail", "x_front"), report.margin_trace)
    _write_csv(out / "mass.csv", ("t", "total_mass"), report.mass_trace)
    if report.has_oracle:
        _write_csv(out / "report.csv", ("t", "E"), sorted(report.errors.items()))


def diagnostic_failures(report: RunReport) -> list[str]:
    """Checks whose failure turns a completed run into exit code 3."""
    cfg = report.config
    bad = []
    if report.clips:
        bad.append(f"{report.clips} clipped point values")
    if cfg.scheme is Scheme.NOC_FRONT_TRACKING and report.mass_drift > 5e-3:
        bad.append(f"mass drift {report.mass_drift:.3g}")
    if cfg.scheme is Scheme.NOC_FRONT_TRACKING and report.exact_margins:
        for c, (xt, xf) in zip(report.checkpoints, report.exact_margins):
            if max(abs(c.x_tail - xt), abs(c.x_front - xf)) > cfg.dx:
                bad.append(f"margins off by more than one cell at t={c.t:g}")
                break
    if cfg.experiment is Experiment.RUN_OUT and cfg.scheme is not Scheme.LAGRANGIAN:
        d = runout_diagnostics(report)
        if not d.ok:
            bad.append(f"run-out diagnostics failed: {d}")
    return bad


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="avalanche1d", description="1D granular avalanche solvers")
    ap.add_argument("config", nargs="?", help="key = value configuration file")
    ap.add_argument("--experiment", choices=[e.value for e in Experiment])
    ap.add_argument("--scheme", choices=[s.value for s in Scheme])
    ap.add_argument("--recon", help="minmod, superbee, unlimited, weno2 or weno3")
    ap.add_argument("--n", type=int)
    ap.add_argument("--cfl", type=float)
    ap.add_argument("--dt", type=float)
    ap.add_argument("--t-end", dest="t_end", type=float)
    ap.add_argument("--out", help="directory for CSV output")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--margin-order", dest="margin_order", type=int)
    ap.add_argument("--mu", type=float, help="artificial viscosity (Lagrangian scheme)")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="any other config key")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        values = {}
        if args.config:
            values.update(parse_config_text(Path(args.config).read_text()))
        for item in args.set:
            if "=" not in item:
                raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
            k, v = item.split("=", 1)
            values[k.strip()] = v.strip()
        for flag, key in FLAGS.items():
            v = getattr(args, flag)
            if v is not None:
                values[key] = str(v)
        cfg = config_from_mapping(values)
    except (ConfigError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        report = run(cfg)
    except RunError as e:
        print(f"scheme error: {e}", file=sys.stderr)
        return EXIT_SCHEME
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except AvalancheError as e:
        print(f"scheme error: {e}", file=sys.stderr)
        return EXIT_SCHEME

    if cfg.out:
        write_report(report, Path(cfg.out))
    for c in report.checkpoints:
        line = f"t={c.t:8.3f}  h_max={np.max(c.h):.6f}"
        if c.x_front is not None:
            line += f"  tail={c.x_tail:.4f}  front={c.x_front:.4f}"
        if c.E is not None:
            line += f"  E={c.E:.4e}"
        print(line)
    print(f"steps={report.steps} clips={report.clips}")

    bad = diagnostic_failures(report)
    for msg in bad:
        print(f"diagnostic failed: {msg}", file=sys.stderr)
    return EXIT_DIAGNOSTIC if bad else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
