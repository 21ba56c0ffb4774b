"""Command-line front end.

Subcommands: decode (one word, JSON to stdout), wer (Monte-Carlo sweep
over Eb/N0 values, CSV/JSON out), sweep (one-axis parameter sweep),
instanton (failure search campaign, JSON out), project (single
parity-polytope projection).  Exit status is 0 whenever the requested
computation completed; a decoding failure is data, not an error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .admm import ConfigError
from .code_graph import AlistError, load_alist
from .channels import AwgnParams, awgn_llr, awgn_transmit_zero
from .instanton import IsaPdParams, IsaRParams, RaySearchError, instanton_campaign
from .parity_polytope import project_parity_polytope
from .wer import (
    DECODER_KINDS,
    SWEEP_AXES,
    DecoderSetup,
    StopRule,
    ebn0_to_sigma,
    results_json,
    run_sweep,
    run_wer_point,
    write_csv,
)

_DEFAULT_ALPHA = {"lp": 0.0, "pd-l1": 0.6, "pd-l2": 0.8, "rlpd": 0.6, "rlpd-inf": math.inf}


def _default_threads():
    """--threads default; override with the ADMMDEC_THREADS environment variable."""
    raw = os.environ.get("ADMMDEC_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"ADMMDEC_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"ADMMDEC_THREADS must be >= 1, got {value}")
    return value


def _add_decoder_flags(sub):
    sub.add_argument("--code", required=True, help="alist file of the parity-check matrix")
    sub.add_argument("--decoder", required=True, choices=DECODER_KINDS)
    sub.add_argument("--alpha", type=float, default=None, help="penalty / reweighting strength")
    sub.add_argument("--mu", type=float, default=3.0)
    sub.add_argument("--rho", type=float, default=1.9)
    sub.add_argument("--tmax", type=int, default=1000)
    sub.add_argument("--eps", type=float, default=1e-5)
    sub.add_argument("--rounds", type=int, default=2, help="reweighted LP rounds")


def _setup_from_args(args):
    alpha = args.alpha if args.alpha is not None else _DEFAULT_ALPHA[args.decoder]
    if args.decoder == "rlpd-inf":
        alpha = math.inf
    return DecoderSetup(
        kind=args.decoder,
        alpha=alpha,
        mu=args.mu,
        epsilon=args.eps,
        t_max=args.tmax,
        rho=args.rho,
        rounds=args.rounds,
    )


def _parse_values(text):
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"could not parse comma-separated floats from {text!r}") from exc


def _cmd_decode(args):
    graph = load_alist(args.code)
    setup = _setup_from_args(args)
    decoder = setup.build(graph)
    if (args.llr is None) == (args.ebn0 is None):
        raise ValueError("exactly one of --llr and --ebn0 is required")
    if args.llr is not None:
        with open(args.llr) as fh:
            gamma = np.array(_parse_values(fh.read().replace("\n", ",")))
        if gamma.size != graph.n:
            raise ValueError(f"LLR file has {gamma.size} values, code length is {graph.n}")
    else:
        sigma = ebn0_to_sigma(args.ebn0, graph.rate())
        ch = AwgnParams(sigma)
        y = awgn_transmit_zero(graph, ch, args.seed)
        gamma = awgn_llr(y, ch)
    out = decoder(gamma)
    print(
        json.dumps(
            {
                "x_soft": out.x_soft.tolist(),
                "x_hard": out.x_hard.tolist(),
                "iterations": out.iterations,
                "converged": out.converged,
                "integral": out.integral,
                "valid_codeword": out.valid_codeword,
            }
        )
    )
    return 0


def _cmd_wer(args):
    graph = load_alist(args.code)
    setup = _setup_from_args(args)
    stop = StopRule(target_errors=args.target_errors, max_trials=args.max_trials)
    points = []
    for idx, ebn0 in enumerate(_parse_values(args.ebn0)):
        points.append(
            run_wer_point(
                graph, setup, ebn0, stop, args.seed, threads=args.threads, _entropy=(args.seed, idx)
            )
        )
    write_csv(points, args.out)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results_json(points, code_path=args.code), fh, indent=2)
    for p in points:
        print(
            f"ebn0={p.ebn0_db:.6g} trials={p.trials} errors={p.word_errors} "
            f"wer={p.wer:.6g} ci=[{p.ci_low:.6g},{p.ci_high:.6g}]"
        )
    return 0


def _cmd_sweep(args):
    graph = load_alist(args.code)
    setup = _setup_from_args(args)
    stop = StopRule(target_errors=args.target_errors, max_trials=args.max_trials)
    values = _parse_values(args.values)
    points, rejected = run_sweep(
        graph, setup, args.axis, values, args.ebn0, stop, args.seed, threads=args.threads
    )
    write_csv(points, args.out)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results_json(points, code_path=args.code), fh, indent=2)
    for p in points:
        print(
            f"{args.axis}-point decoder={p.decoder} alpha={p.alpha:.6g} mu={p.mu:.6g} rho={p.rho:.6g} "
            f"tmax={p.t_max} ebn0={p.ebn0_db:.6g} wer={p.wer:.6g}"
        )
    for value, message in rejected:
        print(f"rejected {args.axis}={value:.6g}: {message}", file=sys.stderr)
    return 0


def _cmd_instanton(args):
    graph = load_alist(args.code)
    setup = _setup_from_args(args)
    cfg = setup.decoder_config()
    cfg.validate_for_graph(graph)
    if setup.kind in ("rlpd", "rlpd-inf"):
        raise ValueError("instanton search drives the one-shot decoders (lp, pd-l1, pd-l2)")
    pd_params = IsaPdParams(sigma=args.sigma)
    result = instanton_campaign(
        graph,
        cfg,
        pd_params,
        k_trials=args.trials,
        seed=args.seed,
        refine=args.refine,
        r_params=IsaRParams(),
    )
    payload = results_json([], code_path=args.code)["meta"]
    doc = {
        "meta": {**payload, "decoder": setup.kind, "alpha": setup.reported_alpha(), "sigma": args.sigma,
                 "trials": args.trials, "seed": args.seed, "refine": bool(args.refine)},
        **result.to_dict(),
    }
    with open(args.out, "w") as fh:
        json.dump(doc, fh, indent=2)
    print(
        f"trials={args.trials} skipped={result.skipped_trials} "
        f"min_sq_norm={result.min_sq_norm:.6g} quantile_sq_norm={result.quantile_sq_norm:.6g}"
    )
    return 0


def _cmd_project(args):
    vector = np.array(_parse_values(args.vector))
    if vector.size != args.d:
        raise ValueError(f"--vector has {vector.size} entries, --d is {args.d}")
    z = project_parity_polytope(vector)
    print(",".join(f"{v:.6g}" for v in z))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="admmdec", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decode", help="decode one LLR vector or one simulated transmission")
    _add_decoder_flags(p)
    p.add_argument("--llr", help="file of comma/whitespace-separated LLRs")
    p.add_argument("--ebn0", type=float, help="simulate all-zero transmission at this Eb/N0 (dB)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("wer", help="word-error-rate points over a list of Eb/N0 values")
    _add_decoder_flags(p)
    p.add_argument("--ebn0", required=True, help="comma-separated Eb/N0 values in dB")
    p.add_argument("--target-errors", type=int, default=200)
    p.add_argument("--max-trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--json", help="optional JSON output path")
    p.set_defaults(func=_cmd_wer)

    p = sub.add_parser("sweep", help="sweep alpha, mu, rho, tmax, or ebn0")
    _add_decoder_flags(p)
    p.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p.add_argument("--values", required=True, help="comma-separated axis values")
    p.add_argument("--ebn0", type=float, default=2.0, help="base Eb/N0 (dB) for non-ebn0 axes")
    p.add_argument("--target-errors", type=int, default=200)
    p.add_argument("--max-trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--json", help="optional JSON output path")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("instanton", help="search for minimal failing noise vectors")
    _add_decoder_flags(p)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--refine", action="store_true", help="apply random gradient-free refinement")
    p.add_argument("--threads", type=int, default=_default_threads(), help="accepted for symmetry; trials run serially")
    p.add_argument("--out", required=True, help="JSON output path")
    p.set_defaults(func=_cmd_instanton)

    p = sub.add_parser("project", help="project one vector onto the parity polytope")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--vector", required=True, help="comma-separated entries")
    p.set_defaults(func=_cmd_project)

    return parser


def main(argv=None):
    try:
        parser = build_parser()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AlistError, ConfigError, RaySearchError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
