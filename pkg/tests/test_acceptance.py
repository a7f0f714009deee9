"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line (with the measured quantities
and its runtime against the budget); the lines are printed in the pytest
terminal summary.  Run alone with ``pytest tests/test_acceptance.py``.
"""
import hashlib
import math
import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from ladderlab.functionals import FermatTriple, Functionals, default_config
from ladderlab.ladder import LadderConfig, fit_exponent, gap_ratio, get_ladder
from ladderlab.ortho import GenerationSpec, IdentityLadder, gram_matrix
from ladderlab.phase import build_phase_track
from ladderlab.quadrature import get_integrator, ingham_main_term
from ladderlab.selberg import (complementary_check, estimate_d, lift_check, mixed_mean_check,
                               segment_moment_check)
from ladderlab.zeta import hardy_z

RESULTS: dict[int, str] = {}


@contextmanager
def criterion(number: int, title: str, budget_s: float):
    """Record one line for the criterion; the body sets ``state['ok']`` and ``state['info']``."""
    state = {"ok": False, "info": ""}
    start = time.perf_counter()
    try:
        yield state
    finally:
        elapsed = time.perf_counter() - start
        ok = state["ok"] and elapsed <= budget_s
        RESULTS[number] = (f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {state['info']} "
                           f"[{elapsed:.1f}s / {budget_s:.0f}s]")
    assert state["ok"], RESULTS[number]
    assert elapsed <= budget_s, RESULTS[number]


def test_c01_zeta_kernel(oracles):
    with criterion(1, "Z(t) vs arbitrary precision", 60) as st:
        ts = np.array(oracles["z_points"])
        assert ts.size == 100 and ts.min() >= 10 and ts.max() <= 1e5
        err = float(np.max(np.abs(hardy_z(ts) - np.array(oracles["z_values"]))))
        z0 = abs(hardy_z(14.1347251417))
        st["ok"] = err <= 1e-8 and z0 < 1e-6
        st["info"] = f"max|dZ| = {err:.2e} (<= 1e-8), |Z(14.1347251417)| = {z0:.1e} (< 1e-6)"


def test_c02_main_term_envelope():
    with criterion(2, "J(T) - main term within 5 sqrt(T)", 600) as st:
        Ts = [1e3, 1e4, 1e5]
        integ = get_integrator()
        rem = [float(integ.J(T) - ingham_main_term(T)) for T in Ts]
        ratios = [abs(r) / math.sqrt(T) for r, T in zip(rem, Ts)]
        a = fit_exponent(Ts, rem)
        st["ok"] = all(q <= 5 for q in ratios)
        st["info"] = ("|E|/sqrt(T) = " + ", ".join(f"{q:.3f}" for q in ratios)
                      + f"; fitted exponent {a:.3f} (reported only)")


def test_c03_increment_law():
    with criterion(3, "increments / ((1-c) T^(r-1)) - 1", 900) as st:
        lad = get_ladder(LadderConfig())
        worst = []
        for T in (1e3, 1e4, 1e5):
            chain = lad.build_chain(T, 3)
            worst.append(max(abs(v - 1.0) for v in chain.scaled_increments()))
        st["ok"] = all(w <= 0.05 for w in worst) and worst[0] > worst[1] > worst[2]
        st["info"] = "max residual at 1e3/1e4/1e5 = " + ", ".join(f"{w:.2e}" for w in worst) + " (<= 0.05, decreasing)"


def test_c04_gap_law():
    with criterion(4, "gap ratio and method agreement", 600) as st:
        lad = get_ladder(LadderConfig())
        Ts = np.geomspace(1e4, 1e5, 10)
        ratios, diffs = [], []
        for T in Ts:
            x_inv = lad.reverse_step(float(T), "mainterm-invert")
            x_inc = lad.reverse_step(float(T), "increment-solve")
            ratios.append(gap_ratio(T, x_inv))
            diffs.append(abs(x_inc - x_inv) / (x_inc - T))
        st["ok"] = all(0.8 <= q <= 1.2 for q in ratios) and max(diffs) <= 0.05
        st["info"] = (f"gap ratio in [{min(ratios):.4f}, {max(ratios):.4f}] (within [0.8, 1.2]); "
                      f"max method gap difference {max(diffs):.2e} (<= 0.05)")


def test_c05_selberg_suite():
    with criterion(5, "Selberg suite, l = 1, T = 1e4, k = 3, kappa = 10", 1800) as st:
        T = 1e4
        track = build_phase_track(10.0, 2 * T + 1)
        chain = get_ladder(LadderConfig()).build_chain(T, 3)
        d = estimate_d(1, T, track).d_hat
        d2 = estimate_d(1, 2 * T, track).d_hat
        drift = abs(d2 - d) / d
        reps = [segment_moment_check(chain, 1, d, track),
                lift_check(chain, 1, 3, 1, d, track),
                mixed_mean_check(chain, 1, 1, d, track),
                complementary_check(chain, 1, 1, d, track)]
        st["ok"] = d > 0 and drift <= 5 / math.log(T) and all(r.passed for r in reps)
        st["info"] = (f"d_hat = {d:.5f}, doubling drift {drift:.2e} (<= {5 / math.log(T):.3f}); "
                      + ", ".join(f"{r.theorem_id} {r.residual:.3g}/{r.expected_envelope:.3g}" for r in reps))


@pytest.fixture(scope="module")
def fn():
    return Functionals(get_ladder(default_config()))


def test_c06_f1(fn):
    with criterion(6, "F1 at tau = 1e4 and its algebra", 600) as st:
        errs = {x: abs(fn.f1_estimate(x, 1e4) - x) for x in (0.5, 1.0, 2.0)}
        algebra = [fn.f1_algebra_check((1.0, 1.0), "sum"), fn.f1_algebra_check((0.7, 1.3), "sum"),
                   fn.f1_algebra_check((2.0, 3.0), "product"), fn.f1_algebra_check((2.0, 2.0), "quotient")]
        st["ok"] = all(e <= 0.04 for e in errs.values()) and all(r.residual <= 0.05 for r in algebra)
        st["info"] = ("|F1 - x| = " + ", ".join(f"{e:.4f}" for e in errs.values())
                      + "; algebra residuals " + ", ".join(f"{r.residual:.4f}" for r in algebra))


def test_c07_f2_f3(fn):
    with criterion(7, "corrected F2 and F3", 600) as st:
        f2 = [fn.f2_estimate(1.3, tau)[1] for tau in (25, 30, 35)]
        f3 = fn.f3_estimate(2.0, 300)[1]
        st["ok"] = all(abs(v - 1.0) <= 0.02 for v in f2) and abs(f3 - 2.0) <= 0.05
        st["info"] = ("F2(1.3) corrected = " + ", ".join(f"{v:.5f}" for v in f2)
                      + f"; F3(2, 300) corrected = {f3:.5f}")


def _random_triples(count, seed=1729):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        x, y, z = (int(v) for v in rng.integers(1, 10, 3))
        t = FermatTriple(x, y, z, int(rng.integers(1, 6)))
        if 0.3 <= t.rational <= 3.0 and t not in out:
            out.append(t)
    return out


def test_c08_fermat(fn):
    with criterion(8, "Fermat discriminator, variant 1", 600) as st:
        d_false = fn.fermat_zeta_test(FermatTriple(1, 1, 1, 3), 1, [1e4]).details["distance"]
        d_true = fn.fermat_zeta_test(FermatTriple(3, 4, 5, 2), 1, [1e4]).details["distance"]
        reps = [fn.fermat_zeta_test(t, 1, [1e4]) for t in _random_triples(10)]
        worst = max(r.residual for r in reps)
        st["ok"] = d_false >= 0.9 and d_true <= 0.03 and all(r.passed for r in reps)
        st["info"] = (f"(1,1,1,3) distance {d_false:.4f} (>= 0.9); (3,4,5,2) distance {d_true:.4f} (<= 0.03); "
                      f"10 random triples worst | |est-1| - |q-1| | = {worst:.4f} (<= 0.04)")


def test_c09_orthogonality():
    with criterion(9, "generated Legendre system", 600) as st:
        rep = gram_matrix(GenerationSpec(1e4, (1,), 4))
        ident = gram_matrix(GenerationSpec(1e4, (1,), 4), ladder=IdentityLadder())
        n = np.arange(5)
        ident_err = float(np.max(np.abs(ident.matrix - np.diag(2.0 / (2 * n + 1)))))
        st["ok"] = rep.max_offdiag_rel <= 1e-3 and ident_err <= 1e-8 and rep.converged
        st["info"] = (f"max off-diagonal {rep.max_offdiag_rel:.2e} (<= 1e-3); identity double error "
                      f"{ident_err:.1e}; scale {rep.diag_scale:.6f} vs {rep.expected_scale:.6f}")


CAMPAIGNS = [
    ["hl-integral", "--T", "1000,10000,100000", "--format", "json"],
    ["ladder", "--T", "1000,10000,100000", "--k", "3"],
    ["selberg", "--T", "10000", "--k", "3", "--format", "json"],
    ["functional", "--kind", "F1", "--x", "1", "--tau-grid", "1e3,1e4,3e4"],
    ["fermat", "--triple", "1,1,1,3", "--format", "json"],
    ["ortho", "--T", "10000", "--n-max", "4"],
]


def _run_campaigns(tmp, cache):
    digests = []
    for i, argv in enumerate(CAMPAIGNS):
        out = tmp / f"report_{i}"
        subprocess.run([sys.executable, "-m", "ladderlab", *argv, "--out", str(out), "--cache-dir", str(cache)],
                       check=False, capture_output=True)
        digests.append(hashlib.sha256(out.read_bytes()).hexdigest())
    return digests


def test_c10_determinism(tmp_path):
    with criterion(10, "byte-identical reports across runs", 1800) as st:
        # first run fills the sample cache, second reads it: reports must not depend on that
        cache = tmp_path / "cache"
        (tmp_path / "a").mkdir()
        (tmp_path / "b").mkdir()
        first = _run_campaigns(tmp_path / "a", cache)
        second = _run_campaigns(tmp_path / "b", cache)
        same = sum(a == b for a, b in zip(first, second))
        st["ok"] = same == len(CAMPAIGNS)
        st["info"] = f"{same}/{len(CAMPAIGNS)} campaign reports identical (cold vs warm cache)"
