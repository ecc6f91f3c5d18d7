"""``squeezesim`` command-line front end.

Exit codes: 0 success, 2 config validation failure, 3 numeric failure.
Data files carry no timestamps; the version banner goes to stderr.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys

from . import __version__
from .config import ConfigError, ExperimentConfig
from .gaussian import UnphysicalStateError
from .scenarios import run_budget, run_characterize, run_spectrum, run_sql

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
SPECTRUM_COLUMNS = ("omega_hz", "floor_snu", "signal_snu", "total_snu", "total_db")


def _fmt(x):
    # shortest round-trip repr keeps CSV bytes stable across runs
    return "" if x is None else repr(float(x))


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else _fmt(v) for v in row])


def spectrum_rows(res):
    return zip(res.omega_hz, res.floor_snu, res.signal_snu, res.total_snu, res.total_db)


def _characterize(cfg, args, out):
    res = run_characterize(cfg, dark=not args.no_dark)
    print(f"{'theta_rad':>10} {'v_snu':>10} {'v_db':>9}", file=out)
    step = max(1, len(res.thetas) // 24)
    for t, v, d in list(zip(res.thetas, res.variance_snu, res.variance_db))[::step]:
        print(f"{t:10.4f} {v:10.6f} {d:9.4f}", file=out)
    print(f"min {res.min_db:.4f} dB  max {res.max_db:+.4f} dB", file=out)
    if res.dark_snu:
        sub = res.subtracted_db
        print(f"dark-subtracted: min {sub.min():.4f} dB  max {sub.max():+.4f} dB", file=out)
    if args.csv:
        write_csv(
            os.path.join(args.out, "characterize.csv"),
            ("theta_rad", "v_snu", "v_db"),
            zip(res.thetas, res.variance_snu, res.variance_db),
        )


def _spectrum(cfg, args, out):
    run = run_spectrum(cfg, dark=not args.no_dark)
    print(f"grid: {len(run.squeezed)} points, "
          f"{run.squeezed.omega_hz[0]:.6g} to {run.squeezed.omega_hz[-1]:.6g} Hz", file=out)
    for name, floor in (("coherent", run.coherent_floor), ("squeezed", run.squeezed_floor)):
        db = 10.0 * math.log10(floor)
        print(f"{name:>9} floor {floor:.6f} SNU  {db:+.4f} dB", file=out)
    print(f"enhancement {run.enhancement_db:+.4f} dB", file=out)
    if run.dark_snu:
        print(f"dark-subtracted enhancement {run.subtracted_enhancement_db:+.4f} dB", file=out)
    peaks = run.peak_frequencies()
    for label, mode in zip(cfg.mode_labels, cfg.modes):
        f_m = mode.omega_m / (2.0 * math.pi)
        if peaks.size:
            near = peaks[abs(peaks - mode.omega_m).argmin()] / (2.0 * math.pi)
            print(f"mode {label}: configured {f_m:.6g} Hz, peak at {near:.6g} Hz", file=out)
    if args.csv:
        for name, res in (("coherent", run.coherent), ("squeezed", run.squeezed)):
            write_csv(os.path.join(args.out, f"spectrum_{name}.csv"), SPECTRUM_COLUMNS, spectrum_rows(res))


def _sql(cfg, args, out):
    run = run_sql(cfg)
    print(f"{'r':>7} {'N':>12} {'imprecision':>12} {'backaction':>12} {'total':>12}", file=out)
    for row in run.rows:
        print(f"{row.r:7.4f} {row.n:12.6g} {row.imprecision:12.6g} {row.backaction:12.6g} {row.total:12.6g}",
              file=out)
    for r, n_star, s_min in run.optima:
        print(f"optimum r={r:.4f}: N* = {n_star:.6g}, S_min = {s_min:.6g}", file=out)
    if args.csv:
        write_csv(
            os.path.join(args.out, "sql.csv"),
            ("r", "n", "imprecision", "backaction", "total"),
            ((x.r, x.n, x.imprecision, x.backaction, x.total) for x in run.rows),
        )


def _budget(cfg, args, out):
    run = run_budget(cfg, dark=not args.no_dark)
    erosion = [None] + run.erosion_db()
    print(f"{'stage':>20} {'eta':>8} {'v_snu':>10} {'level_db':>9} {'erosion_db':>10}", file=out)
    rows = []
    for st, er in zip(run.stages, erosion):
        eta = "" if st.eta is None else f"{st.eta:.4f}"
        er_s = "" if er is None else f"{er:+.4f}"
        print(f"{st.label:>20} {eta:>8} {st.variance_snu:10.6f} {st.level_db:9.4f} {er_s:>10}", file=out)
        rows.append((st.label, st.eta, st.variance_snu, st.level_db, er))
    print(f"output relative to coherent floor {run.output_db:+.4f} dB", file=out)
    if run.target_db is not None:
        print(f"target {run.target_db:+.4f} dB", file=out)
        if run.residual_eta is None:
            res = "unreachable"
        elif run.residual_eta > 1.0:
            res = f"{run.residual_eta:.4f} (> 1, chain already too lossy)"
        else:
            res = f"{run.residual_eta:.4f}"
        req = "unreachable" if run.required_source_r is None else f"{run.required_source_r:.4f}"
        print(f"unattributed efficiency to reach target: {res}", file=out)
        print(f"source r to reach target with this chain: {req}", file=out)
    if args.csv:
        write_csv(os.path.join(args.out, "budget.csv"),
                  ("stage", "eta", "v_snu", "level_db", "erosion_db"), rows)


COMMANDS = {
    "characterize": _characterize,
    "spectrum": _spectrum,
    "sql": _sql,
    "budget": _budget,
}


def build_parser():
    p = argparse.ArgumentParser(prog="squeezesim", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="experiment config (JSON)")
    p.add_argument("--out", default=".", help="directory for CSV output")
    p.add_argument("--csv", action="store_true", help="write CSV files to --out")
    p.add_argument("--no-dark", action="store_true", help="drop electronic dark noise")
    return p


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    print(f"squeezesim {__version__}", file=sys.stderr)
    try:
        cfg = ExperimentConfig.load(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: --config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.csv:
        os.makedirs(args.out, exist_ok=True)
    try:
        COMMANDS[args.command](cfg, args, out)
    except UnphysicalStateError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
