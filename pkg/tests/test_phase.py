import math

import numpy as np
import pytest

from ladderlab.errors import CoverageError, DomainError, ResourceError
from ladderlab.phase import (ANCHOR_T, S_ANCHOR, build_phase_track, s1_head, s1_of_t, s_of_t,
                             samples_per_gap)
from ladderlab.quadrature import integrate
from ladderlab.zeta import theta


def test_s_matches_oracle(track, oracles):
    for t, ref in oracles["s_values"].items():
        assert s_of_t(track, float(t)) == pytest.approx(ref, abs=1e-8)


def test_anchor_value(oracles):
    assert S_ANCHOR == pytest.approx(oracles["s_values"]["10.0"], abs=1e-15)


def test_zero_counts(track, oracles):
    for t, n in oracles["n_values"].items():
        t = float(t)
        assert theta(t) / math.pi + 1 + s_of_t(track, t) == pytest.approx(n, abs=1e-6)
        assert np.count_nonzero(track.zeros <= t) == n


def test_n_integral_and_nondecreasing(track):
    n = track.n_values()
    off = np.where(track.is_zero, 0.5, 0.0)
    assert np.max(np.abs(n - off - np.round(n - off))) < 1e-6
    assert np.all(np.diff(n) > -1e-6)


def test_jump_across_first_zero(track, oracles):
    g = oracles["first_zero"]
    assert s_of_t(track, g + 1e-7) - s_of_t(track, g - 1e-7) == pytest.approx(1.0, abs=1e-5)


def test_close_zero_pair_resolved(track):
    pair = track.zeros[(track.zeros > 7005.0) & (track.zeros < 7005.2)]
    assert pair.size == 2
    assert pair[1] - pair[0] < 0.05


def test_mean_of_s_small(track):
    res = integrate(lambda t: s_of_t(track, t), 1e3, 1e4, 1e-6, breakpoints=track.grid)
    assert abs(res.value / 9e3) <= 0.05


def test_s1_matches_oracle(track, oracles):
    for t, ref in oracles["s1_values"].items():
        assert s1_of_t(track, float(t)) == pytest.approx(ref, abs=1e-6)


def test_s1_head_continuity(track):
    assert s1_head(ANCHOR_T) == pytest.approx(s1_of_t(track, ANCHOR_T), abs=1e-14)
    assert s1_head(0.0) == 0.0


def test_s1_derivative_is_s(track):
    t, h = 1234.567, 1e-4
    fd = (s1_of_t(track, t + h) - s1_of_t(track, t - h)) / (2 * h)
    assert fd == pytest.approx(s_of_t(track, t), abs=1e-6)


def test_degenerate_track():
    tr = build_phase_track(100.0, 100.0)
    assert tr.grid.tolist() == [100.0]
    assert tr.zeros.size == 0
    ref = build_phase_track(10.0, 100.0)
    assert s1_of_t(tr, 100.0) == pytest.approx(s1_of_t(ref, 100.0), abs=1e-12)


def test_trimmed_track_agrees(track):
    tr = build_phase_track(500.0, 600.0)
    t = np.linspace(500.0, 600.0, 37)
    np.testing.assert_allclose(s_of_t(tr, t), s_of_t(track, t), atol=1e-8)
    with pytest.raises(CoverageError):
        s1_of_t(tr, 400.0)


def test_coverage_and_domain_errors(track):
    with pytest.raises(CoverageError):
        s_of_t(track, 3e4)
    with pytest.raises(DomainError):
        build_phase_track(5.0, 20.0)
    with pytest.raises(DomainError):
        build_phase_track(30.0, 20.0)


def test_budget_exhaustion():
    with pytest.raises(ResourceError):
        build_phase_track(10.0, 5e3, budget=1000)


def test_cost_monotone_in_tol():
    assert samples_per_gap(1e-3) <= samples_per_gap(1e-6) <= samples_per_gap(1e-9)
    loose = build_phase_track(10.0, 2e3, tol=1e-3)
    tight = build_phase_track(10.0, 2e3, tol=1e-8)
    assert loose.grid.size <= tight.grid.size
    assert loose.zeros.size == tight.zeros.size
