"""zeta-functionals built from the first-step increment

    I(T) = int_T^{[T]^1} |zeta(1/2+it)|^2 dt  ~  (1 - c) T

evaluated along a ray (F1: T = x tau / (1-c)), an exponential (F2: T = x^tau)
and a power (F3: T = tau^x), plus the Fermat-rational discriminators built on
them.  Limits in tau are certified by trend only: a verdict is "converged" when
the last residual is at most ``tol_conv`` and the residuals on the last three
grid points decrease.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import AdmissibilityError, BracketError, DomainError, RangeCapError
from .ladder import DEFAULT_METHOD, JacobLadder, LadderConfig, get_ladder
from .quadrature import ONE_MINUS_C, IntegralResult
from .reports import TheoremReport, make_report

#: T0 used by the functionals; tau ranges such as 1.3^25 ~ 706 need it below 10^3
FUNCTIONAL_T0 = 100.0
TOL_CONV = 0.05
KINDS = ("F1", "F2", "F3")
LOG_1MC = math.log(ONE_MINUS_C)


def default_config() -> LadderConfig:
    return LadderConfig(T0=FUNCTIONAL_T0)


def tau1(x: float, T0: float = FUNCTIONAL_T0, rule: str = "ray") -> float:
    """Lower admissible tau for F1.

    ``rule="ray"`` uses max{((1-c)/x)^2, (1-c) T0 / x}, i.e. exactly the
    condition that the ray point x tau/(1-c) exceeds T0.  ``rule="squared"``
    uses T0^2 in place of the second entry.
    """
    if not x > 0:
        raise DomainError("x must be positive")
    second = T0 ** 2 if rule == "squared" else ONE_MINUS_C * T0 / x
    return max((ONE_MINUS_C / x) ** 2, second)


def tau2(x: float, T0: float = FUNCTIONAL_T0) -> float:
    """max{1/ln^2 x, ln^2 T0}, for x > 1."""
    if not x > 1:
        raise DomainError("F2 needs x > 1")
    return max(1.0 / math.log(x) ** 2, math.log(T0) ** 2)


def tau3(x: float, T0: float = FUNCTIONAL_T0) -> float:
    """max{T0^(1/x), T0}, for x > 0."""
    if not x > 0:
        raise DomainError("x must be positive")
    return max(T0 ** (1.0 / x), T0)


@dataclass(frozen=True)
class FunctionalEstimate:
    """Estimates of one functional over an increasing tau grid."""

    kind: str
    x: float
    tau_grid: tuple[float, ...]
    raw: tuple[float, ...]
    corrected: tuple[float, ...]
    target: float
    residuals: tuple[float, ...]
    converged: bool
    final_residual: float
    tol_conv: float = TOL_CONV

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"kind must be one of {KINDS}")
        if not (len(self.raw) == len(self.corrected) == len(self.tau_grid) == len(self.residuals)):
            raise DomainError("raw, corrected and tau_grid must have equal length")
        if any(b <= a for a, b in zip(self.tau_grid, self.tau_grid[1:])):
            raise DomainError("tau_grid must be strictly increasing")

    @property
    def verdict(self) -> tuple[bool, float]:
        return self.converged, self.final_residual


def trend_verdict(residuals, tol_conv: float = TOL_CONV, strict: bool = True) -> bool:
    """Converged: final |residual| <= tol_conv and a decreasing tail.

    ``strict`` asks for a strictly decreasing sequence on the last three
    points; otherwise the last residual only has to be below the one two
    steps earlier (a decrease across the window, tolerating the oscillating
    error term in between).
    """
    res = [abs(r) for r in residuals]
    if not res or res[-1] > tol_conv:
        return False
    tail = res[-3:]
    if strict:
        return all(b < a for a, b in zip(tail, tail[1:]))
    return len(tail) == 1 or tail[-1] < tail[0]


@dataclass(frozen=True)
class FermatTriple:
    """(x, y, z, n) with the exact rational (x^n + y^n) / z^n."""

    x: int
    y: int
    z: int
    n: int

    def __post_init__(self):
        for name in ("x", "y", "z", "n"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v < 1:
                raise DomainError(f"{name} must be a positive integer, got {v!r}")

    @property
    def numerator(self) -> int:
        return int(self.x) ** int(self.n) + int(self.y) ** int(self.n)

    @property
    def denominator(self) -> int:
        return int(self.z) ** int(self.n)

    @property
    def exact(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def rational(self) -> float:
        # Python integers are arbitrary precision; the division is exact-rounded
        return float(self.exact)


def fermat_rational(triple: FermatTriple) -> float:
    """(x^n + y^n) / z^n from exact integer arithmetic."""
    return triple.rational


class Functionals:
    """The three functionals on top of one ladder."""

    def __init__(self, ladder: JacobLadder | None = None, method: str = DEFAULT_METHOD, tau1_rule: str = "ray"):
        self.ladder = ladder or get_ladder(default_config())
        self.method = method
        self.tau1_rule = tau1_rule

    @property
    def T0(self) -> float:
        return self.ladder.cfg.T0

    @property
    def t_cap(self) -> float:
        return self.ladder.integrator.t_cap

    def _upper_bound(self, T: float) -> float:
        return T * (1.0 + 2.0 * ONE_MINUS_C / math.log(T))

    def increment(self, T: float) -> IntegralResult:
        """int_T^{[T]^1} |zeta|^2 with [T]^1 from the configured reverse step."""
        if T < self.T0:
            raise AdmissibilityError(f"T = {T:g} below T0 = {self.T0:g}")
        if self._upper_bound(T) > self.t_cap:
            raise RangeCapError(f"[T]^1 for T = {T:g} would exceed the height cap {self.t_cap:g}")
        try:
            X = self.ladder.reverse_step(T, self.method)
        except BracketError as exc:
            raise RangeCapError(str(exc)) from exc
        return self.ladder.integrator.increment(T, X)

    # -- F1 ---------------------------------------------------------------

    def f1_estimate(self, x: float, tau: float) -> float:
        """(1/tau) int over the ray point x tau/(1-c); tends to x."""
        threshold = tau1(x, self.T0, self.tau1_rule)
        if not tau > threshold:
            raise AdmissibilityError(f"tau = {tau:g} must exceed tau1({x:g}) = {threshold:g}")
        T = x * tau / ONE_MINUS_C
        if self._upper_bound(T) > self.t_cap:
            raise RangeCapError(f"ray point {T:g} too high for the cap {self.t_cap:g}",
                                self.t_cap * ONE_MINUS_C / (x * 1.1))
        return self.increment(T).value / tau

    def f1_limit(self, x: float, grid, tol_conv: float = TOL_CONV) -> FunctionalEstimate:
        grid = _check_grid(grid)
        raw = tuple(self.f1_estimate(x, tau) for tau in grid)
        res = tuple(r - x for r in raw)
        return FunctionalEstimate("F1", x, grid, raw, raw, x, res, trend_verdict(res, tol_conv, strict=False),
                                  abs(res[-1]), tol_conv)

    def f1_algebra_check(self, xs, mode: str, tau: float = 1.0e4, tolerance: float = 0.05) -> TheoremReport:
        """Sum, product or quotient property of F1 at a common tau."""
        xs = [float(v) for v in xs]
        if not xs or any(not v > 0 for v in xs):
            raise DomainError("xs must be nonempty and positive")
        if mode == "sum":
            lhs = self.f1_estimate(math.fsum(xs), tau)
            rhs = math.fsum(self.f1_estimate(v, tau) for v in xs)
        elif mode == "product":
            lhs = self.f1_estimate(math.prod(xs), tau)
            rhs = math.prod(self.f1_estimate(v, tau) for v in xs)
        elif mode == "quotient":
            if len(xs) != 2:
                raise DomainError("quotient mode takes exactly two values")
            lhs = self.f1_estimate(xs[0] / xs[1], tau)
            # the 1/tau factors cancel in the ratio of the two increments
            rhs = self.f1_estimate(xs[0], tau) / self.f1_estimate(xs[1], tau)
        else:
            raise DomainError(f"mode must be sum, product or quotient, got {mode!r}")
        return make_report(f"f1-{mode}", lhs, rhs, abs(lhs - rhs), tolerance, xs=xs, tau=tau)

    # -- F2 ---------------------------------------------------------------

    def max_tau_f2(self, x: float) -> float:
        cap = self.t_cap
        return math.log(cap / (1.0 + 2.0 * ONE_MINUS_C / math.log(cap))) / math.log(x)

    def f2_estimate(self, x: float, tau: float) -> tuple[float, float]:
        """raw = I(x^tau)^(1/tau) -> x; corrected = raw / (x (1-c)^(1/tau)) -> 1."""
        threshold = tau2(x, self.T0)
        if not tau > threshold:
            raise AdmissibilityError(f"tau = {tau:g} must exceed tau2({x:g}) = {threshold:g}")
        if tau > self.max_tau_f2(x):
            raise RangeCapError(f"x^tau = {x:g}^{tau:g} exceeds the height cap", self.max_tau_f2(x))
        inc = self.increment(x ** tau).value
        raw = math.exp(math.log(inc) / tau)
        corrected = math.exp((math.log(inc) - LOG_1MC) / tau) / x
        return raw, corrected

    def f2_limit(self, x: float, grid, tol_conv: float = TOL_CONV) -> FunctionalEstimate:
        grid = _check_grid(grid)
        pairs = [self.f2_estimate(x, tau) for tau in grid]
        raw = tuple(p[0] for p in pairs)
        corr = tuple(p[1] for p in pairs)
        res = tuple(c - 1.0 for c in corr)
        return FunctionalEstimate("F2", x, grid, raw, corr, 1.0, res, trend_verdict(res, tol_conv),
                                  abs(res[-1]), tol_conv)

    # -- F3 ---------------------------------------------------------------

    def max_tau_f3(self, x: float) -> float:
        cap = self.t_cap
        return (cap / (1.0 + 2.0 * ONE_MINUS_C / math.log(cap))) ** (1.0 / x)

    def f3_estimate(self, x: float, tau: float) -> tuple[float, float]:
        """raw = ln I(tau^x) / ln tau -> x; corrected removes ln(1-c)/ln tau."""
        threshold = tau3(x, self.T0)
        if not tau > threshold:
            raise AdmissibilityError(f"tau = {tau:g} must exceed tau3({x:g}) = {threshold:g}")
        if tau > self.max_tau_f3(x):
            raise RangeCapError(f"tau^x = {tau:g}^{x:g} exceeds the height cap", self.max_tau_f3(x))
        inc = self.increment(tau ** x).value
        raw = math.log(inc) / math.log(tau)
        return raw, raw - LOG_1MC / math.log(tau)

    def f3_limit(self, x: float, grid, tol_conv: float = TOL_CONV) -> FunctionalEstimate:
        grid = _check_grid(grid)
        pairs = [self.f3_estimate(x, tau) for tau in grid]
        raw = tuple(p[0] for p in pairs)
        corr = tuple(p[1] for p in pairs)
        res = tuple(c - x for c in corr)
        return FunctionalEstimate("F3", x, grid, raw, corr, x, res, trend_verdict(res, tol_conv),
                                  abs(res[-1]), tol_conv)

    # -- Fermat discriminators ----------------------------------------------

    def fermat_estimate(self, triple: FermatTriple, variant: int, tau: float) -> tuple[float, float]:
        """(raw, estimate) of the functional that should reproduce the Fermat rational."""
        q = triple.rational
        if variant == 1:
            v = self.f1_estimate(q, tau)
            return v, v
        if variant == 2:
            num = self.increment(triple.numerator * tau / ONE_MINUS_C).value
            den = self.increment(triple.denominator * tau / ONE_MINUS_C).value
            return num / den, num / den
        if variant == 3:
            return self.f3_estimate(q, tau)
        if variant == 4:
            top = max(triple.numerator, triple.denominator)
            if top * math.log(tau) > math.log(self.t_cap):
                raise RangeCapError(f"tau^{top} exceeds the height cap {self.t_cap:g}",
                                    self.t_cap ** (1.0 / top))
            lo, hi = float(tau) ** triple.denominator, float(tau) ** triple.numerator
            if not min(lo, hi) >= self.T0:
                raise AdmissibilityError(f"tau^k must be at least T0 = {self.T0:g}")
            ln_num = math.log(self.increment(hi).value)
            ln_den = math.log(self.increment(lo).value)
            return ln_num / ln_den, (ln_num - LOG_1MC) / (ln_den - LOG_1MC)
        raise DomainError(f"variant must be 1, 2, 3 or 4, got {variant!r}")

    def fermat_zeta_test(self, triple: FermatTriple, variant: int, tau_grid,
                         tolerance: float = 0.04) -> TheoremReport:
        """Distance of the functional estimate from 1 against |rational - 1|.

        The verdict uses the largest tau of the grid; all estimates are kept
        in the report details.
        """
        grid = _check_grid(tau_grid)
        pairs = [self.fermat_estimate(triple, variant, tau) for tau in grid]
        estimate = pairs[-1][1]
        q = triple.rational
        distance = abs(estimate - 1.0)
        residual = abs(distance - abs(q - 1.0))
        return make_report(
            f"fermat-v{variant}", estimate, q, residual, tolerance,
            triple=[int(triple.x), int(triple.y), int(triple.z), int(triple.n)], variant=variant,
            rational=q, estimate=estimate, distance=distance, fermat_equation_holds=triple.exact == 1,
            tau_grid=list(grid), estimates=[p[1] for p in pairs], raw=[p[0] for p in pairs])


def _check_grid(grid) -> tuple[float, ...]:
    grid = tuple(float(t) for t in grid)
    if not grid:
        raise DomainError("tau grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("tau grid must be strictly increasing")
    return grid


_DEFAULT: Functionals | None = None


def default_functionals() -> Functionals:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Functionals()
    return _DEFAULT


def f1_estimate(x: float, tau: float) -> float:
    return default_functionals().f1_estimate(x, tau)


def f1_limit(x: float, grid) -> FunctionalEstimate:
    return default_functionals().f1_limit(x, grid)


def f1_algebra_check(xs, mode: str, tau: float = 1.0e4) -> TheoremReport:
    return default_functionals().f1_algebra_check(xs, mode, tau)


def f2_estimate(x: float, tau: float) -> tuple[float, float]:
    return default_functionals().f2_estimate(x, tau)


def f3_estimate(x: float, tau: float) -> tuple[float, float]:
    return default_functionals().f3_estimate(x, tau)


def fermat_zeta_test(triple: FermatTriple, variant: int, tau_grid) -> TheoremReport:
    return default_functionals().fermat_zeta_test(triple, variant, tau_grid)
