import math

import numpy as np
import pytest

from ladderlab.errors import BracketError, ConfigError, DomainError, IterationDepthError
from ladderlab.ladder import (BETA, JacobLadder, LadderConfig, fit_exponent, g_inverse, gap_ratio,
                              main_term_g)
from ladderlab.quadrature import ONE_MINUS_C, hl_integral, integrate


def test_config_validation():
    with pytest.raises(ConfigError, match="T0"):
        LadderConfig(T0=50)
    with pytest.raises(ConfigError, match="k_max"):
        LadderConfig(k_max=0)
    with pytest.raises(ConfigError, match="tol"):
        LadderConfig(tol=0)


def test_g_inverse_roundtrip():
    y = np.array([5.0, 100.0, 1e4, 7.5e5])
    np.testing.assert_allclose(g_inverse(main_term_g(y)), y, rtol=1e-14)
    with pytest.raises(BracketError):
        g_inverse(-10.0)


def test_phi1_at_100(oracles):
    lad = JacobLadder(LadderConfig(T0=100))
    assert lad.phi1(100.0) == pytest.approx(oracles["phi1_100"], rel=1e-9)


def test_phi1_basic(ladder):
    T = 1e4
    y = ladder.phi1(T)
    assert y < T
    assert 0.8 <= (T - y) * math.log(T) / (ONE_MINUS_C * T) <= 1.2
    assert ladder.phi1(T) < ladder.phi1(T + 100)
    assert ladder.phi1_residual(T) <= ladder.cfg.tol
    with pytest.raises(DomainError):
        ladder.phi1(500.0)


def test_phi1_iter(ladder):
    T = 1e5
    assert ladder.phi1_iter(T, 0) == T
    one, two = ladder.phi1(T), ladder.phi1_iter(T, 2)
    assert two < one < T
    assert two == pytest.approx(ladder.phi1(one), rel=1e-15)
    with pytest.raises(IterationDepthError) as info:
        ladder.phi1_iter(1100.0, 5)
    assert info.value.step >= 2


def test_inverse_pairs(ladder):
    rng = np.random.default_rng(7)
    for T in np.sort(10.0 ** rng.uniform(3, 5, 20)):
        X = ladder.reverse_step(float(T))
        assert ladder.phi1(X) == pytest.approx(T, abs=2 * ladder.cfg.tol * T)


def test_increment_solve_defines_increment(ladder):
    T = 1e4
    X = ladder.reverse_step(T, "increment-solve")
    assert hl_integral(T, X).value / (ONE_MINUS_C * T) == pytest.approx(1.0, abs=10 * ladder.cfg.tol)


def test_methods_agree(ladder):
    T = 1e4
    x_inc = ladder.reverse_step(T, "increment-solve")
    x_inv = ladder.reverse_step(T, "mainterm-invert")
    assert abs(x_inc - x_inv) <= 0.05 * (x_inc - T)
    with pytest.raises(DomainError):
        ladder.reverse_step(T, "bisect")


def test_gap_window(ladder):
    T = 1e4
    assert 0.8 <= gap_ratio(T, ladder.reverse_step(T)) <= 1.2


def test_cap_reported_with_window():
    lad = JacobLadder(LadderConfig(t_cap=1.03e4))
    with pytest.raises(BracketError) as info:
        lad.reverse_step(1e4)
    assert info.value.window is not None


def test_chain_shape(ladder, chain_1e4):
    c = chain_1e4
    assert c.k == 3 and c.base == 1e4
    levels = [c.level(r) for r in range(4)]
    assert all(b > a for a, b in zip(levels, levels[1:]))
    assert c.points[-1] / 1e4 - 1 <= 3 * ONE_MINUS_C * 1.3 / math.log(1e4)
    assert ladder.build_chain(1e4, 1).points[0] == ladder.reverse_step(1e4)
    assert c.increments[2].value > c.increments[0].value
    with pytest.raises(DomainError):
        c.level(4)
    with pytest.raises(DomainError):
        ladder.build_chain(1e4, 9)


def test_chain_scaled_increments(chain_1e4):
    assert max(abs(v - 1.0) for v in chain_1e4.scaled_increments()) <= 0.05
    for res, scaled in zip(chain_1e4.residuals, chain_1e4.scaled_increments()):
        assert res == pytest.approx(scaled - 1.0, abs=1e-15)


def test_omega_ratio(ladder):
    assert 0.95 <= ladder.omega(1e5) / math.log(1e5) <= 1.05


def test_tilde_z_is_derivative(ladder):
    T, D = 1e4, 50.0
    res = integrate(ladder.tilde_z_sq, T, T + D, 1e-12, max_width=0.25)
    assert res.value == pytest.approx(ladder.phi1(T + D) - ladder.phi1(T), rel=1e-9)
    t = np.linspace(T, T + D, 301)
    assert np.all(ladder.tilde_z_sq(t) >= 0)
    phi, dens = ladder.phi1_and_density(t)
    np.testing.assert_allclose(dens, ladder.tilde_z_sq(t), rtol=1e-14)


def test_fit_exponent():
    xs = np.array([1e3, 1e4, 1e5])
    assert fit_exponent(xs, 3.0 * xs ** 0.4) == pytest.approx(0.4, abs=1e-12)


def test_beta():
    assert BETA == pytest.approx(0.57721566490153286 - math.log(2 * math.pi), abs=1e-15)
