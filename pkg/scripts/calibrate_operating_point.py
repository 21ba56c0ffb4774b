"""Calibrate the WER operating point used by the acceptance suite.

Sweeps plain LP decoding on the [155,64] Tanner code over a small grid of
Eb/N0 values and reports which ones land in the 3-10% WER band where the
decoder-comparison tests are run.  With --compare it then simulates the
four decoder setups at the chosen point so the recorded numbers can be
regenerated from scratch.

The shipped calibration (seed 20260815, 200-error pilot, then deeper
confirmation runs) picked Eb/N0 = 2.5 dB:

    lp                WER 5.85%  CI [5.57, 6.14]   (1500 errors)
    rlpd (a=0.6, 2r)  WER 4.38%  CI [4.17, 4.61]   (1500 errors)
    pd-l2 (a=2,T200)  WER 2.65%  CI [2.45, 2.87]   (600 errors)

Usage:
    python3 scripts/calibrate_operating_point.py
    python3 scripts/calibrate_operating_point.py --ebn0 2.0,2.25,2.5,2.75 \
        --target-errors 200 --compare 2.5 --out results/calibration.csv
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from admmdec.admm import ConfigError
from admmdec.code_graph import load_alist
from admmdec.wer import DecoderSetup, StopRule, run_wer_point, write_csv

HERE = pathlib.Path(__file__).resolve().parents[1]
BAND = (0.03, 0.10)


def parse_args(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--code", default=str(HERE / "codes" / "tanner_155_64.alist"))
    ap.add_argument("--ebn0", default="2.0,2.25,2.5,2.75,3.0", help="comma-separated dB values")
    ap.add_argument("--target-errors", type=int, default=200)
    ap.add_argument("--max-trials", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=20260815)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument(
        "--compare",
        type=float,
        default=None,
        metavar="DB",
        help="also run lp / pd-l1 / pd-l2 / rlpd at this Eb/N0",
    )
    ap.add_argument("--out", default=None, help="optional CSV path for all points")
    return ap.parse_args(argv)


def show(point, note=""):
    flag = "*" if BAND[0] <= point.wer <= BAND[1] else " "
    print(
        f"{flag} {point.decoder:8s} {point.ebn0_db:5.2f} dB  "
        f"wer {100 * point.wer:6.3f}%  ci [{100 * point.ci_low:.3f}, {100 * point.ci_high:.3f}]  "
        f"errors {point.word_errors}/{point.trials}  {point.wall_seconds:6.1f}s  {note}"
    )


def main(argv=None):
    args = parse_args(argv)
    graph = load_alist(args.code)
    stop = StopRule(target_errors=args.target_errors, max_trials=args.max_trials)
    points = []

    print(f"# LP sweep on {args.code} ('*' marks the {BAND[0]:.0%}-{BAND[1]:.0%} band)")
    lp = DecoderSetup(kind="lp")
    for value in (float(v) for v in args.ebn0.split(",")):
        point = run_wer_point(graph, lp, value, stop, seed=args.seed, threads=args.threads)
        points.append(point)
        show(point)

    if args.compare is not None:
        print(f"# decoder comparison at {args.compare} dB")
        setups = [
            (DecoderSetup(kind="lp"), ""),
            (DecoderSetup(kind="pd-l1", alpha=0.6), ""),
            (DecoderSetup(kind="pd-l2", alpha=2.0, t_max=200), "short budget"),
            (DecoderSetup(kind="rlpd", alpha=0.6, rounds=2), ""),
        ]
        for setup, note in setups:
            try:
                point = run_wer_point(graph, setup, args.compare, stop, seed=args.seed, threads=args.threads)
            except ConfigError as exc:
                print(f"  skipped {setup.kind}: {exc}")
                continue
            points.append(point)
            show(point, note)

    if args.out:
        write_csv(points, args.out)
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
