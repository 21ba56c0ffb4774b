"""End-to-end acceptance gate.

One test per release criterion; each prints a single PASS/FAIL line with
the measured numbers so a captured log reads as a checklist.  The
instanton-norm test is tagged slow (regenerating the failure statistics
takes tens of minutes); everything else runs in a normal CI pass.

The word-error comparisons run at Eb/N0 = 2.5 dB on the shipped
[155,64] code.  That operating point was calibrated once so that plain
LP decoding lands in the 3-10% word-error band (measured 5.9% with a
[5.6%, 6.1%] Wilson interval at 1500 errors) and is recorded here and
in the README.
"""

import csv
import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from admmdec.admm import ConfigError, DecoderConfig, PenaltySpec, decode, weak_ml_test
from admmdec.channels import AwgnParams, awgn_llr, awgn_transmit_zero
from admmdec.code_graph import sample_codewords
from admmdec.instanton import IsaPdParams, instanton_campaign, min_confusion_noise
from admmdec.oracles import (
    equivariance_check,
    ml_bruteforce,
    oracle_min_confusion_halfspace,
)
from admmdec.parity_polytope import (
    oracle_project_rows,
    project_rows,
    variational_certificate_rows,
)
from admmdec.wer import DecoderSetup, StopRule, ebn0_to_sigma, run_wer_point

from conftest import HAMMING_PATH, TANNER_PATH

OPERATING_EBN0_DB = 2.5  # calibrated: plain LP decodes at ~5.9% WER here
ACCEPT_SEED = 20260815


_CAPTURE = None


@pytest.fixture(autouse=True)
def _verdicts_visible(capfd):
    """Let _verdict punch through output capture so the checklist always
    lands in the terminal log, with or without -s."""
    global _CAPTURE
    _CAPTURE = capfd
    yield
    _CAPTURE = None


def _verdict(name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    if _CAPTURE is not None:
        with _CAPTURE.disabled():
            print(line, flush=True)
    else:
        print(line, flush=True)
    assert ok, f"{name}: {detail}"


# ---------------------------------------------------------------- criterion 1


def test_projection_matches_bruteforce_oracle_bulk():
    """10,000 random points per dimension 2..8 agree with the certified oracle."""
    t0 = time.perf_counter()
    worst_dev = 0.0
    worst_cert = -math.inf
    total = 0
    for d in range(2, 9):
        pts = np.random.default_rng(1000 + d).uniform(-2.0, 3.0, size=(10000, d))
        got = project_rows(pts)
        ref = oracle_project_rows(pts)  # raises if its own certificate fails
        worst_dev = max(worst_dev, float(np.abs(got - ref).max()))
        worst_cert = max(worst_cert, float(variational_certificate_rows(pts, got).max()))
        total += pts.shape[0]
    elapsed = time.perf_counter() - t0
    ok = worst_dev <= 1e-9 and worst_cert <= 1e-9
    _verdict(
        "projection-oracle-equivalence",
        ok,
        f"{total} points, max |dev| {worst_dev:.2e}, max certificate gap {worst_cert:.2e}, {elapsed:.1f}s",
    )


# ---------------------------------------------------------------- criterion 2


def test_decoding_is_codeword_independent(hamming, tanner):
    """Iterates decoded from any codeword mirror the zero-word run to 1e-9.

    The noise level is chosen so every run converges: the mirror identity is
    exact in real arithmetic, but runs that exhaust the iteration budget keep
    amplifying rounding noise (the two trajectories round differently) until
    the comparison measures float chaos rather than the decoder's symmetry.
    At sigma = 0.6 every run here stops within a dozen iterations and the
    mirrored iterates agree to ~1e-14; at sigma = 0.7 a handful of
    budget-exhausted runs already blow the deviation up to O(1).
    """
    ch = AwgnParams(0.6)
    penalties = (PenaltySpec.none(), PenaltySpec.l1(0.6), PenaltySpec.l2(0.8))
    worst = 0.0
    pairs = 0
    stop_mismatches = 0
    for graph, tag in ((hamming, 0), (tanner, 1)):
        words = sample_codewords(graph, 50, seed=ACCEPT_SEED + tag)
        for t, c in enumerate(words):
            y0 = awgn_transmit_zero(graph, ch, seed=ACCEPT_SEED + 1000 * tag + t)
            y = np.where(c == 1, -y0, y0)
            for pen in penalties:
                rep = equivariance_check(c, y, ch, DecoderConfig(penalty=pen), graph)
                worst = max(worst, rep.max_x_dev, rep.max_z_dev, rep.max_lambda_dev)
                stop_mismatches += 0 if rep.iterations_equal else 1
                pairs += 1
    ok = worst <= 1e-9 and stop_mismatches == 0
    _verdict(
        "codeword-independence",
        ok,
        f"{pairs} (codeword, noise, penalty) runs, max deviation {worst:.2e}, "
        f"{stop_mismatches} stop mismatches",
    )


# ---------------------------------------------------------------- criterion 3


def test_integral_outputs_pass_ml_certificate(hamming):
    """Integral converged penalized decodes that pass the fixed-point test
    are exactly the brute-force ML words (when the ML word is unique)."""
    sigma = ebn0_to_sigma(3.0, hamming.rate())
    ch = AwgnParams(sigma)
    cfg = DecoderConfig(penalty=PenaltySpec.l2(0.8))
    checked = mismatches = certified = 0
    for t in range(10000):
        y = awgn_transmit_zero(hamming, ch, seed=t)
        gamma = awgn_llr(y, ch)
        out = decode(gamma, hamming, cfg)
        if not (out.converged and out.integral and out.valid_codeword):
            continue
        checked += 1
        if not weak_ml_test(out.x_hard, gamma, hamming, cfg):
            continue
        certified += 1
        best, unique = ml_bruteforce(gamma, hamming)
        if unique and not np.array_equal(out.x_hard, best):
            mismatches += 1
    ok = mismatches == 0 and certified > 0
    _verdict(
        "ml-certificate-agreement",
        ok,
        f"10000 trials, {checked} integral decodes, {certified} certified, {mismatches} mismatches",
    )


# ------------------------------------------------------------- criteria 4 + 5


@pytest.fixture(scope="module")
def lp_operating_point(tanner):
    return run_wer_point(
        tanner,
        DecoderSetup(kind="lp"),
        OPERATING_EBN0_DB,
        StopRule(target_errors=1500, max_trials=2_000_000),
        seed=ACCEPT_SEED,
    )


@pytest.fixture(scope="module")
def rlpd2_operating_point(tanner):
    return run_wer_point(
        tanner,
        DecoderSetup(kind="rlpd", alpha=0.6, rounds=2),
        OPERATING_EBN0_DB,
        StopRule(target_errors=1500, max_trials=2_000_000),
        seed=ACCEPT_SEED,
    )


def test_penalized_beats_plain_lp(tanner, lp_operating_point):
    lp = lp_operating_point
    pd = run_wer_point(
        tanner,
        DecoderSetup(kind="pd-l2", alpha=2.0, mu=3.0, rho=1.9, t_max=200),
        OPERATING_EBN0_DB,
        StopRule(target_errors=600, max_trials=2_000_000),
        seed=ACCEPT_SEED,
    )
    in_band = 0.03 <= lp.wer <= 0.10
    separated = pd.ci_high < lp.ci_low
    ok = in_band and separated and lp.word_errors >= 200 and pd.word_errors >= 200
    _verdict(
        "penalized-vs-plain-wer",
        ok,
        f"LP {lp.wer:.4f} [{lp.ci_low:.4f},{lp.ci_high:.4f}] ({lp.word_errors} errs) vs "
        f"L2(alpha=2) {pd.wer:.4f} [{pd.ci_low:.4f},{pd.ci_high:.4f}] ({pd.word_errors} errs), "
        f"band 3-10%: {in_band}, disjoint CIs: {separated}",
    )


def test_reweighting_beats_plain_lp(tanner, lp_operating_point, rlpd2_operating_point):
    lp = lp_operating_point
    r2 = rlpd2_operating_point
    # ten rounds, matched trial-for-trial with the two-round run: the
    # extra rounds only ever repair otherwise-failing trials
    r10 = run_wer_point(
        tanner,
        DecoderSetup(kind="rlpd", alpha=0.6, rounds=10),
        OPERATING_EBN0_DB,
        StopRule(target_errors=10**9, max_trials=r2.trials),
        seed=ACCEPT_SEED,
    )
    separated = r2.ci_high < lp.ci_low
    diminishing = r10.wer <= r2.ci_high
    ok = separated and diminishing and r2.word_errors >= 200 and r10.word_errors >= 200
    _verdict(
        "reweighting-vs-plain-wer",
        ok,
        f"LP {lp.wer:.4f} [{lp.ci_low:.4f},{lp.ci_high:.4f}] vs "
        f"2-round {r2.wer:.4f} [{r2.ci_low:.4f},{r2.ci_high:.4f}] (disjoint: {separated}); "
        f"10-round {r10.wer:.4f} <= 2-round upper {r2.ci_high:.4f}: {diminishing}",
    )


# ---------------------------------------------------------------- criterion 6


@pytest.mark.slow
def test_smallest_failing_noise_norms(tanner):
    """300-trial failure searches land in the expected squared-norm bands.

    The iteration budget is part of the failure definition, so each
    decoder setting uses the budget its band was measured under: the
    full default budget for plain LP, a 100-iteration budget for the
    strongly penalized decoder.
    """
    params = IsaPdParams(sigma=0.5)
    lp_res = instanton_campaign(
        tanner, DecoderConfig(), params, k_trials=300, seed=ACCEPT_SEED, refine=True
    )
    l2_res = instanton_campaign(
        tanner,
        DecoderConfig(penalty=PenaltySpec.l2(2.0), t_max=100),
        params,
        k_trials=300,
        seed=ACCEPT_SEED,
        refine=True,
    )
    lp_ok = 15.0 <= lp_res.min_sq_norm <= 18.0
    l2_ok = 12.3 <= l2_res.min_sq_norm <= 15.3
    ok = lp_ok and l2_ok
    _verdict(
        "instanton-norm-bands",
        ok,
        f"LP min {lp_res.min_sq_norm:.2f} in [15.0, 18.0]: {lp_ok} "
        f"(quantile {lp_res.quantile_sq_norm:.2f}, skipped {lp_res.skipped_trials}); "
        f"L2(alpha=2) min {l2_res.min_sq_norm:.2f} in [12.3, 15.3]: {l2_ok} "
        f"(quantile {l2_res.quantile_sq_norm:.2f}, skipped {l2_res.skipped_trials})",
    )


# ---------------------------------------------------------------- criterion 7


def test_confusion_noise_matches_independent_solver():
    """Closed-form minimal confusion noise equals a probe-and-project solve.

    Sign convention under test: the penalty correction *adds* to the noise
    threshold, K = ||omega||_1 + (sigma^2/2) (sum_i g(omega_i) - N g(0)) with
    g <= 0, i.e. penalized decoders need strictly more noise to prefer a
    fractional omega (worked scalar case omega=0.5, sigma=1, l2 alpha=1 gives
    n* = 1.25, not 1.15 as a subtracted correction would).  The independent
    solver probes the half-space margin at the origin and the unit vectors and
    projects, so it would expose either sign error.
    """
    rng = np.random.default_rng(ACCEPT_SEED)
    worst = 0.0
    for trial in range(1000):
        n_len = int(rng.integers(2, 28))
        omega = rng.uniform(0, 1, n_len)
        sigma = float(rng.uniform(0.3, 1.4))
        alpha = float(rng.uniform(0.1, 2.5))
        pen = (PenaltySpec.none(), PenaltySpec.l1(alpha), PenaltySpec.l2(alpha))[trial % 3]
        got = min_confusion_noise(omega, sigma, pen, n_len)
        ref = oracle_min_confusion_halfspace(omega, sigma, pen, n_len)
        worst = max(worst, float(np.abs(got - ref).max()))
    ok = worst <= 1e-9
    _verdict("confusion-noise-oracle", ok, f"1000 random omegas, max |dev| {worst:.2e}")


# ---------------------------------------------------------------- criterion 8


def _cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "admmdec.cli", *args], capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr
    return proc


def _masked_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    wall = rows[0].index("wall_seconds")
    return [[c for i, c in enumerate(row) if i != wall] for row in rows]


def _masked_json(path):
    doc = json.loads(open(path).read())
    doc["meta"].pop("generated_at", None)
    for p in doc.get("points", []):
        p.pop("wall_seconds", None)
    return doc


def test_cli_runs_are_reproducible(tmp_path):
    """Identical flags and seed give identical artifacts up to wall clocks."""
    outs = []
    for run in ("a", "b"):
        csv_path = tmp_path / f"wer_{run}.csv"
        json_path = tmp_path / f"wer_{run}.json"
        _cli(
            "wer", "--code", str(HAMMING_PATH), "--decoder", "lp", "--tmax", "50",
            "--ebn0", "1.0,2.0", "--target-errors", "6", "--max-trials", "500",
            "--seed", "3", "--out", str(csv_path), "--json", str(json_path),
        )
        inst_path = tmp_path / f"inst_{run}.json"
        _cli(
            "instanton", "--code", str(TANNER_PATH), "--decoder", "pd-l2",
            "--alpha", "2.0", "--tmax", "100", "--trials", "1", "--sigma", "0.5",
            "--seed", "11", "--out", str(inst_path),
        )
        outs.append((_masked_csv(csv_path), _masked_json(json_path), _masked_json(inst_path)))
    ok = outs[0] == outs[1]
    _verdict("cli-reproducibility", ok, "wer CSV+JSON and instanton JSON identical across reruns")


# ---------------------------------------------------------------- criterion 9


def test_oversized_l2_penalty_rejected_up_front(tanner):
    cfg = DecoderConfig(penalty=PenaltySpec.l2(9.0))
    try:
        decode(np.ones(155), tanner, cfg)
        raised, message = False, ""
    except ConfigError as exc:
        raised, message = True, str(exc)
    specific = "alpha < min_degree * mu / 2 = 4.5" in message
    boundary_ok = True
    try:
        DecoderConfig(penalty=PenaltySpec.l2(4.5)).validate_for_graph(tanner)
        boundary_ok = False  # denominator would be exactly zero
    except ConfigError:
        pass
    ok = raised and specific and boundary_ok
    _verdict(
        "l2-alpha-guard",
        ok,
        f"alpha=9 rejected before iterating: {raised}, message pins the bound: {specific}, "
        f"alpha=4.5 boundary rejected: {boundary_ok}",
    )
