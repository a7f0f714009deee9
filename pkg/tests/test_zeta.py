import math

import numpy as np
import pytest

from ladderlab.errors import DomainError
from ladderlab.zeta import (TWO_PI, critical_sample, hardy_z, theta, z_euler_maclaurin,
                            z_riemann_siegel, zeta_mod_sq)


def test_theta_matches_oracle(oracles):
    # 1e-10 absolute, plus the double rounding of the reference itself at large t
    for t, ref in oracles["theta"].items():
        assert theta(float(t)) == pytest.approx(ref, abs=1e-10 + 2 * np.spacing(abs(ref)))


def test_theta_at_two_pi():
    expected = -math.pi - math.pi / 8 + 1 / (48 * TWO_PI) + 7 / (5760 * TWO_PI**3)
    assert theta(TWO_PI) == pytest.approx(expected, abs=1e-6)


def test_theta_domain():
    with pytest.raises(DomainError):
        theta(0.5)
    with pytest.raises(DomainError):
        theta(np.array([2.0, float("nan")]))


def test_z_small_heights(oracles):
    for t, ref in oracles["z_small"].items():
        assert hardy_z(float(t)) == pytest.approx(ref, abs=1e-8)


def test_z_log_uniform_points(oracles):
    z = hardy_z(np.array(oracles["z_points"]))
    assert np.max(np.abs(z - np.array(oracles["z_values"]))) <= 1e-8


def test_first_zero(oracles):
    assert abs(hardy_z(14.1347251417)) < 1e-6
    assert abs(hardy_z(oracles["first_zero"])) < 1e-9


def test_branches_agree_near_switch():
    t = np.linspace(10.0, 30.0, 41)
    assert np.max(np.abs(z_riemann_siegel(t) - z_euler_maclaurin(t))) < 1e-8


def test_shapes_and_scalars():
    assert isinstance(hardy_z(100.0), float)
    assert hardy_z(np.array([[20.0, 30.0]])).shape == (1, 2)
    assert hardy_z(np.array([])).shape == (0,)


def test_negative_height_rejected():
    with pytest.raises(DomainError):
        hardy_z(-1.0)


def test_mod_sq_is_square():
    t = np.array([3.0, 50.0, 2.0e4])
    assert np.allclose(zeta_mod_sq(t), hardy_z(t) ** 2, rtol=0, atol=0)


def test_critical_sample():
    s = critical_sample(100.0)
    assert s.mod_sq == pytest.approx(7.2506174389694493, rel=1e-9)
    assert s.theta == pytest.approx(theta(100.0))
