import math
from fractions import Fraction

import numpy as np
import pytest

from ladderlab.errors import AdmissibilityError, DomainError, RangeCapError
from ladderlab.functionals import (FermatTriple, FunctionalEstimate, Functionals, default_config, fermat_rational,
                                   tau1, tau2, tau3, trend_verdict)
from ladderlab.ladder import get_ladder
from ladderlab.quadrature import ONE_MINUS_C


def test_thresholds():
    assert tau1(1.0, 100.0) == pytest.approx(ONE_MINUS_C * 100.0)
    assert tau1(0.001, 100.0) == pytest.approx((ONE_MINUS_C / 0.001) ** 2)
    assert tau1(1.0, 100.0, rule="squared") == 1e4
    assert tau2(1.3, 100.0) == pytest.approx(math.log(100.0) ** 2)
    assert tau3(2.0, 100.0) == 100.0
    assert tau3(0.5, 100.0) == pytest.approx(1e4)
    with pytest.raises(DomainError):
        tau2(0.9)


def test_trend_verdict():
    assert trend_verdict([0.03, 0.02, 0.01])
    assert not trend_verdict([0.01, 0.02, 0.01])
    assert trend_verdict([0.01, 0.02, 0.005], strict=False)
    assert not trend_verdict([0.1, 0.08, 0.06])
    assert not trend_verdict([])


def test_f1_mainterm(functionals):
    for x, bound in ((0.5, 0.04), (1.0, 0.02), (2.0, 0.04)):
        assert abs(functionals.f1_estimate(x, 1e4) - x) <= bound


def test_f1_increment_solve_is_exact():
    fn = Functionals(get_ladder(default_config()), method="increment-solve")
    for x in (0.7, 1.9):
        assert fn.f1_estimate(x, 3e3) == pytest.approx(x, rel=10 * fn.ladder.cfg.tol)


def test_f1_admissibility(functionals):
    with pytest.raises(AdmissibilityError):
        functionals.f1_estimate(1.0, 10.0)
    with pytest.raises(RangeCapError) as info:
        functionals.f1_estimate(3.0, 2e5)
    assert info.value.max_feasible is not None


def test_f1_limit(functionals):
    est = functionals.f1_limit(1.0, [1e3, 1e4, 3e4])
    assert isinstance(est, FunctionalEstimate)
    assert est.converged and est.final_residual <= 0.05
    assert est.verdict == (True, est.final_residual)
    assert abs(est.residuals[-1]) < abs(est.residuals[0])
    with pytest.raises(DomainError):
        functionals.f1_limit(1.0, [1e4, 1e3])
    with pytest.raises(DomainError):
        functionals.f1_limit(1.0, [])


def test_ray_slope_reproduces_x():
    for x in (0.3, 1.0, 2.7):
        slope = math.atan(x / ONE_MINUS_C)
        assert 0 < slope < math.pi / 2
        assert math.tan(slope) * ONE_MINUS_C == pytest.approx(x, rel=1e-15)


@pytest.mark.parametrize("xs,mode", [((1.0, 1.0), "sum"), ((0.7, 1.3), "sum"), ((2.0, 3.0), "product"),
                                     ((2.0, 2.0), "quotient")])
def test_f1_algebra(functionals, xs, mode):
    rep = functionals.f1_algebra_check(xs, mode)
    assert rep.passed
    if mode == "quotient":
        assert rep.rhs == pytest.approx(1.0, abs=0.02)


def test_f1_algebra_validation(functionals):
    with pytest.raises(DomainError):
        functionals.f1_algebra_check((1.0, 2.0, 3.0), "quotient")
    with pytest.raises(DomainError):
        functionals.f1_algebra_check((1.0,), "ratio")


def test_f2(functionals, oracles):
    for tau in (25, 30, 35):
        raw, corr = functionals.f2_estimate(1.3, tau)
        assert corr == pytest.approx(1.0, abs=0.02)
    raw30, _ = functionals.f2_estimate(1.3, 30)
    assert raw30 / 1.3 == pytest.approx(oracles["one_minus_c_pow_1_30"], rel=0.01)
    gaps = [abs(functionals.f2_estimate(1.3, tau)[0] - 1.3) for tau in (25, 30, 35)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_f2_errors(functionals):
    with pytest.raises(AdmissibilityError):
        functionals.f2_estimate(1.3, 10)
    with pytest.raises(RangeCapError) as info:
        functionals.f2_estimate(1.3, 60)
    assert 50 < info.value.max_feasible < 60


def test_f3(functionals, oracles):
    raw, corr = functionals.f3_estimate(2.0, 200)
    predicted = oracles["log_one_minus_c"] / math.log(200)
    assert raw - 2.0 == pytest.approx(predicted, rel=0.25)
    assert abs(functionals.f3_estimate(2.0, 300)[1] - 2.0) <= 0.05
    lo = functionals.f3_estimate(1.5, 120)[1]
    hi = functionals.f3_estimate(2.5, 120)[1]
    assert hi - lo >= 0.7


def test_f3_errors(functionals):
    with pytest.raises(AdmissibilityError):
        functionals.f3_estimate(2.0, 50)
    with pytest.raises(RangeCapError):
        functionals.f3_estimate(2.5, 300)


def test_fermat_rational_exact():
    assert fermat_rational(FermatTriple(3, 4, 5, 2)) == 1.0
    assert fermat_rational(FermatTriple(1, 1, 1, 3)) == 2.0
    assert FermatTriple(2, 3, 4, 3).exact == Fraction(35, 64)
    assert fermat_rational(FermatTriple(2, 3, 4, 3)) == 0.546875
    big = FermatTriple(10**6, 10**6, 10**6 + 1, 40)
    assert 0 < big.rational < 2 and isinstance(big.numerator, int)
    with pytest.raises(DomainError):
        FermatTriple(0, 1, 1, 3)
    with pytest.raises(DomainError):
        FermatTriple(1, 1, 1, 2.0)


def test_fermat_variants(functionals):
    t = FermatTriple(1, 1, 1, 3)
    v1 = functionals.fermat_zeta_test(t, 1, [1e4])
    assert v1.passed and v1.details["distance"] >= 0.9
    v2 = functionals.fermat_zeta_test(t, 2, [1e3])
    assert v2.details["estimate"] == pytest.approx(2.0, abs=0.05)
    assert v2.details["distance"] >= 0.9
    v3 = functionals.fermat_zeta_test(t, 3, [200, 300])
    assert v3.passed and v3.details["estimates"][-1] == pytest.approx(2.0, abs=0.04)
    pyth = functionals.fermat_zeta_test(FermatTriple(3, 4, 5, 2), 1, [1e4])
    assert pyth.details["distance"] <= 0.03
    assert pyth.details["fermat_equation_holds"]
    with pytest.raises(DomainError):
        functionals.fermat_estimate(t, 5, 1e4)


def test_fermat_variant4(functionals):
    raw, est = functionals.fermat_estimate(FermatTriple(1, 1, 1, 3), 4, 300)
    assert est == pytest.approx(2.0, abs=0.04)
    with pytest.raises(RangeCapError):
        functionals.fermat_estimate(FermatTriple(2, 1, 1, 3), 4, 300)
