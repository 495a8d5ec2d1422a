"""Command-line driver: ``rankcrank [global flags] <command> [flags]``.

Every command writes a JSON report (or a criteria CSV with ``--format csv``)
plus its bulk data as CSV into the output directory, prints one line per
criterion, and exits 0 if all criteria pass, 1 if any fails, 2 on bad
arguments and 3 when a resource limit is hit.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

from . import exact, experiments
from ._backend import BACKENDS, using_backend
from .errors import DomainError, ResourceError
from .report import default_golden_path, write_golden

OUTPUT_ENV = "RANKCRANK_OUTPUT_DIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _seed(s: str) -> int:
    v = int(s)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2**64)")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rankcrank", description="Rank and crank statistics of integer partitions.")
    ap.add_argument("--output-dir", default=os.environ.get(OUTPUT_ENV, "."),
                    help=f"where reports and data go (default ${OUTPUT_ENV} or .)")
    ap.add_argument("--format", choices=("json", "csv"), default="json", help="report format")
    ap.add_argument("--workers", type=_positive, default=1)
    ap.add_argument("--golden", default=None, help="golden threshold file (default: bundled)")
    ap.add_argument("--backend", choices=BACKENDS, default=None)
    ap.add_argument("--calibrate", action="store_true",
                    help="regenerate golden thresholds into --golden (or <output-dir>/golden.json) and exit")
    ap.add_argument("--calibration-seed", type=_seed, default=experiments.CALIBRATION_SEED)
    sub = ap.add_subparsers(dest="command")

    p = sub.add_parser("enumerate", help="exact rank/crank count table")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--stat", choices=exact.STATISTICS, default="rank")
    p.add_argument("--method", choices=exact.METHODS, default="qseries")

    p = sub.add_parser("moments", help="exact moment ratios against the limit moments")
    p.add_argument("--n", type=_positive, nargs="+", required=True)
    p.add_argument("--l-max", type=_positive, default=2)
    p.add_argument("--stat", choices=exact.STATISTICS + ("both",), default="rank")
    p.add_argument("--method", choices=exact.METHODS, default="qseries")
    p.add_argument("--dps", type=_positive, default=exact.DEFAULT_DPS)

    p = sub.add_parser("sample", help="Fristedt sampling of uniform partitions")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--count", type=_positive, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--q", type=float, default=None, help="geometric parameter (default exp(-pi/sqrt(6n)))")
    p.add_argument("--max-rejections", type=int, default=None)
    p.add_argument("--proposal", choices=("pdc", "plain"), default="pdc")
    p.add_argument("--n-boot", type=_positive, default=1000)

    p = sub.add_parser("brownian", help="beta(T) Monte Carlo")
    p.add_argument("--count", type=_positive, default=100_000)
    p.add_argument("--step", type=float, default=1e-4)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--boundary-correction", choices=("none", "half_step", "bridge"), default="none")

    sub.add_parser("verify-identities", help="analytic identity suite")
    return ap


def _write_report(rep, out: Path, stem: str, fmt: str) -> Path:
    if fmt == "json":
        path = out / f"{stem}.json"
        path.write_text(rep.to_json() + "\n")
    else:
        path = out / f"{stem}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("criterion", "passed", "value", "threshold", "relation"))
            for name, c in sorted(rep.to_dict()["criteria"].items()):
                w.writerow((name, int(c["passed"]), c["value"], c["threshold"], c["relation"]))
    return path


def _write_rows(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in r])


def _golden(args):
    if args.golden is not None:
        return experiments.load_golden(args.golden)
    return experiments.golden_or_none()


def _run(args) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.calibrate:
        dest = Path(args.golden) if args.golden else out / "golden.json"
        data = experiments.calibrate(args.calibration_seed, workers=args.workers)
        write_golden(dest, data)
        print(f"wrote {dest}")
        return EXIT_OK
    cmd = args.command
    if cmd == "enumerate":
        rep, table = experiments.enumerate_experiment(args.n, args.stat, args.method, _golden(args))
        stem = f"enumerate_n{args.n}_{args.stat}_{args.method}"
        exact.write_count_tables(out / f"{stem}_counts.csv", [table])
    elif cmd == "moments":
        rep = experiments.moments_experiment(args.n, args.l_max, args.stat, args.method, dps=args.dps)
        stem = f"moments_{args.stat}_lmax{args.l_max}"
        rows = []
        for stat in ("rank", "crank"):
            for r in rep.computed.get(f"{stat}_ratios", []):
                rows.append((stat, r["n"], r["l"], r["ratio_hp"], r["limit"], r["abs_error"]))
        _write_rows(out / f"{stem}_ratios.csv", ("statistic", "n", "l", "ratio", "limit", "abs_error"), rows)
    elif cmd == "sample":
        rep, batch = experiments.sample_experiment(
            args.n, args.count, args.seed, args.workers, _golden(args), args.q, args.max_rejections,
            args.proposal, args.n_boot,
        )
        stem = f"sample_n{args.n}_count{args.count}_seed{args.seed}"
        batch.to_csv(out / f"{stem}_samples.csv")
    elif cmd == "brownian":
        rep, smp = experiments.brownian_experiment(args.count, args.step, args.seed, args.boundary_correction,
                                                   args.workers)
        stem = f"brownian_count{args.count}_seed{args.seed}"
        smp.to_csv(out / f"{stem}_samples.csv")
    elif cmd == "verify-identities":
        rep = experiments.verify_identities_experiment()
        stem = "verify_identities"
    else:
        raise DomainError("a command is required (or --calibrate)")
    path = _write_report(rep, out, f"{stem}_report", args.format)
    for line in rep.summary_lines():
        print(line)
    print(f"report: {path}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command is None and not args.calibrate:
        ap.print_usage(sys.stderr)
        print("rankcrank: error: a command is required", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.backend:
            with using_backend(args.backend):
                return _run(args)
        return _run(args)
    except ResourceError as e:
        print(f"rankcrank: resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (DomainError, ValueError) as e:
        print(f"rankcrank: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
