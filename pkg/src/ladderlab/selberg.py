"""Selberg-moment side of the ladder: d(l) estimation and the identities
linking |S_1|^(2l) integrals with |zeta|^2 increments over ladder segments.

d(l) has no closed form, so it is estimated from the track itself as
(1/T) int_0^T |S_1|^(2l) and that estimate is used wherever d(l) appears.
Envelope constants kappa are calibration parameters and are echoed in every
report.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CoverageError, DomainError, IndexConstraintError
from .ladder import LadderChain
from .phase import ANCHOR_T, PhaseTrack
from .quadrature import MOMENT_TOL, ONE_MINUS_C, IntegralResult, s1_moment
from .reports import TheoremReport, make_report

KAPPA = 10.0
#: exponent used to report H / T^b against the Selberg range T^b <= H <= T
REPORT_B = 0.51


@dataclass(frozen=True)
class SelbergEstimate:
    """Empirical d(l) with the trend (T_i, (1/T_i) int_0^{T_i} - d_hat)."""

    l: int
    T: float
    d_hat: float
    residual_trend: tuple[tuple[float, float], ...]
    moment: IntegralResult

    def __post_init__(self):
        if not self.d_hat > 0:
            raise DomainError(f"d_hat must be positive, got {self.d_hat}")


def _require_head(track: PhaseTrack) -> None:
    if track.anchor_t != ANCHOR_T:
        raise CoverageError("moments from 0 need a track anchored at t = 10")


def estimate_d(l: int, T: float, track: PhaseTrack, tol: float = MOMENT_TOL) -> SelbergEstimate:
    """d_hat = (1/T) int_0^T |S_1|^(2l), with [0, 10] on the low-height branch."""
    _require_head(track)
    T = float(T)
    if T > track.t_end:
        raise CoverageError(f"track ends at {track.t_end:g} < T = {T:g}")
    cuts = [0.0, T / 4, T / 2, T]
    parts = [s1_moment(track, a, b, l, tol) for a, b in zip(cuts[:-1], cuts[1:])]
    cumulative = [math.fsum(p.value for p in parts[: i + 1]) for i in range(3)]
    d_hat = cumulative[-1] / T
    trend = tuple((Ti, Mi / Ti - d_hat) for Ti, Mi in zip(cuts[1:], cumulative))
    moment = IntegralResult(cumulative[-1], math.fsum(p.err_est for p in parts), sum(p.evals for p in parts),
                            (0.0, T), all(p.converged for p in parts))
    return SelbergEstimate(int(l), T, d_hat, trend, moment)


def _check_r(chain: LadderChain, r: int) -> None:
    if not 1 <= r <= chain.k:
        raise IndexConstraintError(f"need 1 <= r <= k = {chain.k}, got r = {r}")


def _moment(track, a, b, l, tol):
    return s1_moment(track, a, b, l, tol).value


def segment_moment_check(chain: LadderChain, l: int, d_hat: float, track: PhaseTrack, r: int = 1,
                    kappa: float = KAPPA, tol: float = MOMENT_TOL) -> TheoremReport:
    """(1/d) int_{T^{r-1}}^{T^r} |S_1|^(2l) against the gap T^r - T^{r-1}."""
    T = chain.base
    envelope = kappa * T / math.log(T) ** 2
    if chain.k == 0:
        return make_report("segment-moment", 0.0, 0.0, 0.0, envelope, r=0, l=l, kappa=kappa, vacuous=True)
    _check_r(chain, r)
    a, b = chain.level(r - 1), chain.level(r)
    lhs = _moment(track, a, b, l, tol) / d_hat
    rhs = b - a
    return make_report("segment-moment", lhs, rhs, abs(lhs - rhs), envelope, r=r, l=l, kappa=kappa,
                       H=rhs, H_over_T_b=rhs / T ** REPORT_B, b=REPORT_B)


def telescoped_check(chain: LadderChain, r: int, s: int, l: int, d_hat: float, track: PhaseTrack,
                     kappa: float = KAPPA, tol: float = MOMENT_TOL) -> TheoremReport:
    """Summed form: (1/d) int_{T^{r-1}}^{T^{s-1}} |S_1|^(2l) against T^{s-1} - T^{r-1}.

    The integral is assembled from the same per-segment quadratures as the
    single-step check, so the two agree exactly.
    """
    if not 1 <= r <= s - 1 <= chain.k - 1:
        raise IndexConstraintError(f"need 1 <= r <= s-1 <= k-1, got r={r}, s={s}, k={chain.k}")
    T = chain.base
    parts = [_moment(track, chain.level(n - 1), chain.level(n), l, tol) for n in range(r, s)]
    lhs = math.fsum(parts) / d_hat
    rhs = chain.level(s - 1) - chain.level(r - 1)
    envelope = kappa * (s - r) * T / math.log(T) ** 2
    return make_report("telescoped-moment", lhs, rhs, abs(lhs - rhs), envelope, r=r, s=s, l=l, kappa=kappa)


def lift_check(chain: LadderChain, r: int, s: int, l: int, d_hat: float, track: PhaseTrack,
                   kappa: float = KAPPA, tol: float = MOMENT_TOL) -> TheoremReport:
    """Lift of the r-level |zeta|^2 increment to the s-level one."""
    if not 1 <= r <= s - 1 <= chain.k - 1:
        raise IndexConstraintError(f"need 1 <= r <= s-1 <= k-1, got r={r}, s={s}, k={chain.k}")
    T = chain.base
    inc_s = chain.increments[s - 1].value
    inc_r = chain.increments[r - 1].value
    lift = ONE_MINUS_C / d_hat * math.fsum(
        _moment(track, chain.level(n - 1), chain.level(n), l, tol) for n in range(r, s))
    rhs = inc_r + lift
    envelope = kappa * T / math.log(T) ** 2
    return make_report("lift", inc_s, rhs, abs(inc_s - rhs), envelope, r=r, s=s, l=l, kappa=kappa,
                       lift=lift, increment_r=inc_r)


def mixed_mean_check(chain: LadderChain, r: int, l: int, d_hat: float, track: PhaseTrack,
                   kappa: float = KAPPA, tol: float = MOMENT_TOL) -> TheoremReport:
    """(1/T^r) int {d |zeta|^2 + (1-c) |S_1|^(2l)} over [T^{r-1}, T^r] against (1-c) d.

    The residual is relative, |lhs/rhs - 1|, compared with kappa / ln^2 T, so
    the verdict does not depend on the scale of d.
    """
    _check_r(chain, r)
    T = chain.base
    a, b = chain.level(r - 1), chain.level(r)
    inc = chain.increments[r - 1].value
    lhs = (d_hat * inc + ONE_MINUS_C * _moment(track, a, b, l, tol)) / b
    rhs = ONE_MINUS_C * d_hat
    envelope = kappa / math.log(T) ** 2
    return make_report("mixed-mean", lhs, rhs, abs(lhs / rhs - 1.0), envelope, r=r, l=l, kappa=kappa,
                       abs_residual=abs(lhs - rhs))


def complementary_check(chain: LadderChain, r: int, l: int, d_hat: float, track: PhaseTrack,
                   kappa: float = KAPPA, tol: float = MOMENT_TOL) -> TheoremReport:
    """The complementary pair int_0^{T^{r-1}} |S_1|^(2l) and the r-th |zeta|^2 increment."""
    _check_r(chain, r)
    _require_head(track)
    T = chain.base
    a, b = chain.level(r - 1), chain.level(r)
    inc = chain.increments[r - 1].value
    head = _moment(track, 0.0, a, l, tol)
    predicted_head = d_hat / ONE_MINUS_C * inc
    predicted_inc = ONE_MINUS_C / d_hat * head
    res_a = abs(head - predicted_head)
    res_b = abs(inc - predicted_inc)
    # [0, T^{r-1}) and (T^{r-1}, T^r] are disjoint exactly when 0 <= T^{r-1} < T^r
    disjoint = 0.0 <= a < b
    envelope = kappa * T / math.log(T)
    return make_report("complementary", head, predicted_head, max(res_a, res_b), envelope, extra_ok=disjoint,
                       r=r, l=l, kappa=kappa, residual_head=res_a, residual_increment=res_b,
                       increment=inc, predicted_increment=predicted_inc, disjoint=disjoint)
