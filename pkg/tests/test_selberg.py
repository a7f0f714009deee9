import math

import numpy as np
import pytest

from ladderlab.errors import CoverageError, DomainError, IndexConstraintError
from ladderlab.ladder import LadderChain
from ladderlab.phase import build_phase_track
from ladderlab.reports import TheoremReport, make_report
from ladderlab.selberg import (REPORT_B, SelbergEstimate, complementary_check, estimate_d, lift_check,
                               mixed_mean_check, segment_moment_check, telescoped_check)


@pytest.fixture(scope="module")
def d1(track):
    return estimate_d(1, 1e4, track)


def test_d_hat_positive_and_stable(track, d1):
    assert d1.d_hat > 0
    half = estimate_d(1, 5e3, track)
    assert abs(d1.d_hat - half.d_hat) / d1.d_hat <= 5 / math.log(1e4)
    assert [T for T, _ in d1.residual_trend] == [2500.0, 5000.0, 10000.0]
    assert d1.residual_trend[-1][1] == 0.0


def test_d_hat_matches_dense_sampling(track, d1):
    # S_1 has a negative mean near -0.8 and |S_1| > 1 on about 30% of [0, 1e4],
    # so the fourth moment slightly exceeds the second
    from ladderlab.phase import s1_of_t
    v = s1_of_t(track, np.linspace(0.0, 1e4, 1_000_001))
    d2 = estimate_d(2, 1e4, track).d_hat
    assert d1.d_hat == pytest.approx(np.mean(v**2), rel=1e-4)
    assert d2 == pytest.approx(np.mean(v**4), rel=1e-4)
    assert d2 > d1.d_hat


def test_estimate_validation(track):
    with pytest.raises(CoverageError):
        estimate_d(1, 1e5, track)
    with pytest.raises(CoverageError):
        estimate_d(1, 700.0, build_phase_track(500.0, 800.0))
    with pytest.raises(DomainError):
        SelbergEstimate(1, 1e4, 0.0, (), None)


def test_segment_moment(chain_1e4, d1, track):
    rep = segment_moment_check(chain_1e4, 1, d1.d_hat, track)
    assert rep.passed
    assert rep.rhs == pytest.approx(chain_1e4.gaps[0])
    assert rep.details["H_over_T_b"] == pytest.approx(rep.rhs / 1e4 ** REPORT_B)


def test_vacuous_chain(d1, track):
    empty = LadderChain(1e4, (), (), (), "mainterm-invert", ())
    rep = segment_moment_check(empty, 1, d1.d_hat, track)
    assert rep.passed and rep.lhs == rep.rhs == 0.0


def test_telescoping_is_exact(chain_1e4, d1, track):
    steps = [segment_moment_check(chain_1e4, 1, d1.d_hat, track, r=r) for r in (1, 2)]
    tele = telescoped_check(chain_1e4, 1, 3, 1, d1.d_hat, track)
    assert tele.lhs == pytest.approx(math.fsum(s.lhs for s in steps), rel=1e-14)
    assert tele.rhs == pytest.approx(math.fsum(s.rhs for s in steps), rel=1e-14)


def test_lift(chain_1e4, d1, track):
    rep = lift_check(chain_1e4, 1, 3, 1, d1.d_hat, track)
    assert rep.passed
    assert chain_1e4.increments[2].value > chain_1e4.increments[0].value
    for r, s in ((0, 2), (2, 2), (1, 4), (3, 4)):
        with pytest.raises(IndexConstraintError):
            lift_check(chain_1e4, r, s, 1, d1.d_hat, track)


def test_mixed_mean(chain_1e4, d1, track):
    one = mixed_mean_check(chain_1e4, 1, 1, d1.d_hat, track)
    two = mixed_mean_check(chain_1e4, 2, 1, d1.d_hat, track)
    assert one.passed and one.residual <= 0.3
    assert abs(one.lhs / one.rhs - two.lhs / two.rhs) <= 2 * one.expected_envelope
    doubled = mixed_mean_check(chain_1e4, 1, 1, 2 * d1.d_hat, track)
    assert doubled.passed == one.passed


def test_complementary(chain_1e4, d1, track):
    rep = complementary_check(chain_1e4, 1, 1, d1.d_hat, track)
    assert rep.passed and rep.details["disjoint"]
    ratio = rep.details["residual_increment"] / rep.details["residual_head"]
    assert ratio == pytest.approx((1 - 0.57721566490153286) / d1.d_hat, rel=1e-9)
    with pytest.raises(IndexConstraintError):
        complementary_check(chain_1e4, 4, 1, d1.d_hat, track)


def test_report_consistency():
    rep = make_report("x", 1.0, 1.1, 0.1, 0.2)
    assert rep.passed and rep.as_dict()["envelope"] == 0.2
    assert not make_report("x", 1.0, 2.0, 1.0, 0.2).passed
    assert not make_report("x", 1.0, 1.0, float("nan"), 0.2).passed
    with pytest.raises(DomainError):
        TheoremReport("x", 0.0, 0.0, 1.0, 0.5, True)
    with pytest.raises(DomainError):
        make_report("x", 0.0, 0.0, 0.0, 0.0)
