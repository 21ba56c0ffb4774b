"""Long-run WER curves for a user-supplied code.

Intended for overnight runs on large codes (e.g. a [2640,1320]
Margulis-type alist) where interesting WERs are far below what the
acceptance suite samples.  Takes any alist path, runs a list of decoder
setups over a list of Eb/N0 values with a fixed error target, and
checkpoints results to CSV/JSON after every completed point so partial
campaigns survive interruption.

Usage:
    python3 scripts/longrun_wer.py margulis_2640_1320.alist \
        --ebn0 1.6,1.8,2.0,2.2 --decoders lp,pd-l2:2.0 \
        --target-errors 200 --threads 4 --out results/margulis
"""

import argparse
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from admmdec.code_graph import load_alist
from admmdec.wer import DecoderSetup, StopRule, results_json, run_wer_point, write_csv


def parse_decoder(token):
    """'pd-l2:2.0' -> DecoderSetup(kind='pd-l2', alpha=2.0); plain 'lp' works too."""
    kind, _, alpha = token.partition(":")
    kwargs = {"kind": kind}
    if alpha:
        kwargs["alpha"] = float(alpha)
    elif kind in ("pd-l1", "rlpd"):
        kwargs["alpha"] = 0.6
    elif kind == "pd-l2":
        kwargs["alpha"] = 0.8
    return DecoderSetup(**kwargs)


def parse_args(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("code", help="alist file for the code under test")
    ap.add_argument("--ebn0", required=True, help="comma-separated dB values")
    ap.add_argument("--decoders", default="lp", help="comma list, e.g. lp,pd-l1:0.6,pd-l2:2.0,rlpd:0.6")
    ap.add_argument("--target-errors", type=int, default=200)
    ap.add_argument("--max-trials", type=int, default=100_000_000)
    ap.add_argument("--tmax", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default="longrun", help="output stem; writes <stem>.csv and <stem>.json")
    return ap.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    graph = load_alist(args.code)
    print(f"{args.code}: n={graph.n} checks={graph.m} rate={graph.rate():.4f}")
    stop = StopRule(target_errors=args.target_errors, max_trials=args.max_trials)
    setups = [parse_decoder(tok) for tok in args.decoders.split(",")]
    values = [float(v) for v in args.ebn0.split(",")]

    points = []
    for setup in setups:
        setup = DecoderSetup(**{**setup.__dict__, "t_max": args.tmax})
        for value in values:
            point = run_wer_point(graph, setup, value, stop, seed=args.seed, threads=args.threads)
            points.append(point)
            print(
                f"{point.decoder:8s} {point.ebn0_db:5.2f} dB  wer {point.wer:.3e}  "
                f"ci [{point.ci_low:.3e}, {point.ci_high:.3e}]  "
                f"errors {point.word_errors}/{point.trials}  {point.wall_seconds:.0f}s"
            )
            write_csv(points, f"{args.out}.csv")
            with open(f"{args.out}.json", "w") as fh:
                json.dump(results_json(points, code_path=args.code), fh, indent=2)
    print(f"wrote {args.out}.csv and {args.out}.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
