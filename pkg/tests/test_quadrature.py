import math

import numpy as np
import pytest

from ladderlab.errors import CoverageError, DomainError, RangeCapError
from ladderlab.quadrature import (HLIntegrator, IntegralResult, get_integrator,
                                  hl_integral, ingham_main_term, integrate, s1_moment)
from ladderlab.zeta import zeta_mod_sq


def test_constant_and_log():
    assert integrate(lambda t: np.ones_like(t), 0.0, 10.0).value == 10.0
    res = integrate(lambda t: 1.0 / t, 1.0, 100.0, 1e-12)
    assert abs(res.value - math.log(100.0)) <= 1e-12 * math.log(100.0)
    assert res.converged


def test_additivity():
    f = lambda t: np.cos(3 * t) * np.exp(-t / 7)
    whole = integrate(f, 0.0, 9.0, 1e-12).value
    parts = integrate(f, 0.0, 4.0, 1e-12).value + integrate(f, 4.0, 9.0, 1e-12).value
    assert whole == pytest.approx(parts, abs=2e-12)


def test_empty_interval_and_order():
    res = integrate(np.sin, 3.0, 3.0)
    assert res.value == 0.0 and res.err_est == 0.0
    with pytest.raises(DomainError):
        integrate(np.sin, 2.0, 1.0)


def test_vector_valued():
    res = integrate(lambda t: np.stack([t, t * t], axis=-1), 0.0, 3.0, 1e-12)
    np.testing.assert_allclose(res.value, [4.5, 9.0], rtol=1e-13)


def test_budget_flags_nonconvergence():
    res = integrate(lambda t: np.sin(1.0 / t), 1e-6, 1.0, 1e-14, max_evals=300)
    assert not res.converged
    assert res.evals <= 300


def test_integral_result_validation():
    with pytest.raises(DomainError):
        IntegralResult(1.0, -1.0, 0, (0.0, 1.0))
    with pytest.raises(DomainError):
        IntegralResult(1.0, 0.0, 0, (1.0, 0.0))


def test_j_100_oracle(oracles):
    assert get_integrator().J(100.0) == pytest.approx(oracles["J_100"], rel=1e-9)


def test_increment_oracles(oracles):
    assert hl_integral(1000.0, 1010.0).value == pytest.approx(oracles["I_1000_1010"], rel=1e-9)
    assert hl_integral(20000.0, 20005.0).value == pytest.approx(oracles["I_20000_20005"], rel=1e-9)


def test_empty_and_additive_hl():
    assert hl_integral(1e3, 1e3).value == 0.0
    a, b, c = 1234.5, 1700.25, 2222.0
    whole = hl_integral(a, c)
    parts = hl_integral(a, b).value + hl_integral(b, c).value
    assert whole.value == pytest.approx(parts, rel=1e-12)


def test_main_term_residual_sqrt_envelope():
    for T in (1e3, 1e4):
        assert abs(get_integrator().J(T) - ingham_main_term(T)) <= 5 * math.sqrt(T)


def test_mean_value_growth():
    inc = hl_integral(1e4, 2e4).value
    assert inc > 0.9 * 1e4 * math.log(1e4)
    assert inc / 1e4 == pytest.approx(math.log(1e4), rel=0.10)


def test_unit_block_refinement_matches_direct_quadrature():
    direct = integrate(zeta_mod_sq, 3000.0, 3003.5, 1e-12, max_width=0.25)
    assert hl_integral(3000.0, 3003.5).value == pytest.approx(direct.value, rel=1e-9)


def test_cap_and_domain():
    integ = HLIntegrator(1e-6, t_cap=500.0)
    with pytest.raises(RangeCapError):
        integ.J(600.0)
    with pytest.raises(DomainError):
        integ.J(-1.0)


def test_deterministic_fresh_integrators():
    a, b = HLIntegrator(1e-6), HLIntegrator(1e-6)
    assert a.J(1777.7) == b.J(1777.7)
    b.J(3000.0)
    assert b.J(1777.7) == a.J(1777.7)


def test_s1_moment_basics(track):
    assert s1_moment(track, 500.0, 500.0, 1).value == 0.0
    one = s1_moment(track, 2000.0, 2100.0, 1)
    assert one.value > 0 and one.converged
    with pytest.raises(CoverageError):
        s1_moment(track, 2e4, 3e4, 1)
    with pytest.raises(DomainError):
        s1_moment(track, 10.0, 20.0, 0)


def test_s1_moment_decreases_in_l_when_small(track):
    from ladderlab.phase import s1_of_t
    a, b = 1057.5, 1062.5
    t = np.linspace(a, b, 2001)
    assert np.max(np.abs(s1_of_t(track, t))) <= 1.0
    assert s1_moment(track, a, b, 2).value < s1_moment(track, a, b, 1).value


def test_s1_moment_density_stable_under_doubling(track):
    dens = []
    for T in (1e4, 2e4):
        H = T ** 0.6
        dens.append(s1_moment(track, T, T + H, 1).value / H)
    assert dens[1] == pytest.approx(dens[0], rel=0.25)


def test_s1_moment_head_from_zero(track):
    res = s1_moment(track, 0.0, 30.0, 1)
    direct = integrate(lambda t: __import__("ladderlab").s1_of_t(track, t) ** 2, 0.0, 30.0, 1e-10,
                       breakpoints=np.concatenate([np.arange(1.0, 10.0), track.grid[track.grid < 30]]))
    assert res.value == pytest.approx(direct.value, rel=1e-4)
