"""Operational Jacob's ladder phi_1 and its iterations.

phi_1 is defined by inverting the Ingham main term of J exactly::

    g(phi_1(T)) = J(T) - c0,   g(y) = y ln y + (c - ln 2 pi) y.

Then d phi_1/dt = |zeta(1/2+it)|^2 / omega(t) with
omega(t) = g'(phi_1(t)) = ln phi_1(t) + 1 + c - ln 2 pi.

Reverse iterations T^r = phi_1^{-1}(T^{r-1}) come from one of two monotone
root problems:

* ``mainterm-invert``: J(X) = g(T) + c0, the exact inverse of phi_1;
* ``increment-solve``: int_T^X |zeta|^2 = (1 - c) T.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.optimize.elementwise import find_root

from .errors import BracketError, ConfigError, DomainError, IterationDepthError
from .quadrature import (DEFAULT_T_CAP, EULER_GAMMA, HL_TOL, ONE_MINUS_C, HLIntegrator,
                         IntegralResult, get_integrator)
from .zeta import TWO_PI, zeta_mod_sq

BETA = EULER_GAMMA - math.log(TWO_PI)
METHODS = ("mainterm-invert", "increment-solve")
DEFAULT_METHOD = "mainterm-invert"


@dataclass(frozen=True)
class LadderConfig:
    """Ladder parameters; ``a`` and ``delta`` are reporting-only exponents."""

    T0: float = 1.0e3
    c0: float = 0.0
    k_max: int = 8
    tol: float = 1e-9
    a: float = 1.0 / 3.0
    delta: float = 0.01
    hl_tol: float = HL_TOL
    t_cap: float = DEFAULT_T_CAP

    def __post_init__(self):
        if not self.T0 >= 100:
            raise ConfigError("T0", f"must be >= 100, got {self.T0}")
        if int(self.k_max) != self.k_max or self.k_max < 1:
            raise ConfigError("k_max", f"must be a positive integer, got {self.k_max}")
        if not self.tol > 0:
            raise ConfigError("tol", "must be positive")
        if not self.hl_tol > 0:
            raise ConfigError("hl_tol", "must be positive")


@dataclass(frozen=True)
class LadderChain:
    """Base point T with reverse iterates T^1 < ... < T^k."""

    base: float
    points: tuple[float, ...]
    gaps: tuple[float, ...]
    increments: tuple[IntegralResult, ...]
    method: str
    residuals: tuple[float, ...] = field(default=())

    @property
    def k(self) -> int:
        return len(self.points)

    def level(self, r: int) -> float:
        """T^r with T^0 = base."""
        if not 0 <= r <= self.k:
            raise DomainError(f"chain has levels 0..{self.k}, asked for {r}")
        return self.base if r == 0 else self.points[r - 1]

    def scaled_increments(self) -> tuple[float, ...]:
        """increment_r / ((1 - c) T^{r-1}) for r = 1..k."""
        return tuple(inc.value / (ONE_MINUS_C * self.level(r - 1)) for r, inc in enumerate(self.increments, 1))


def main_term_g(y):
    """g(y) = y ln y + (c - ln 2 pi) y."""
    y = np.asarray(y, dtype=float)
    out = y * np.log(y) + BETA * y
    return float(out) if out.ndim == 0 else out


def g_inverse(v):
    """Solve g(y) = v on the increasing branch y > e^(-1 - beta)."""
    arr = np.asarray(v, dtype=float)
    flat = arr.ravel()
    lo = np.full(flat.shape, math.e)
    if np.any(flat <= main_term_g(math.e)):
        raise BracketError("g(y) = v has no solution with y >= e", (math.e, math.inf))
    hi = np.maximum(flat, 20.0)
    res = find_root(lambda y, target: y * np.log(y) + BETA * y - target, (lo, hi), args=(flat,))
    if not np.all(res.success):
        raise BracketError("g inversion did not converge", (math.e, float(hi.max())))
    out = np.asarray(res.x, dtype=float).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


class JacobLadder:
    """phi_1 and its iterations for one configuration and one J integrator."""

    def __init__(self, cfg: LadderConfig | None = None, integrator: HLIntegrator | None = None):
        self.cfg = cfg or LadderConfig()
        self.integrator = integrator or get_integrator(self.cfg.hl_tol, t_cap=self.cfg.t_cap)
        self._reverse: dict[tuple[float, str], float] = {}

    def J(self, t):
        return self.integrator.J(t)

    def _check_floor(self, T) -> None:
        low = np.asarray(T, dtype=float)
        if np.any(~(low >= self.cfg.T0)):
            raise DomainError(f"ladder needs T >= T0 = {self.cfg.T0:g}, got {np.min(low):g}")

    def phi1(self, T):
        """phi_1(T) by inversion of the main term; scalar or array."""
        self._check_floor(T)
        return g_inverse(np.asarray(self.J(T)) - self.cfg.c0)

    def phi1_residual(self, T: float) -> float:
        """Relative residual of g(phi_1(T)) = J(T) - c0."""
        target = self.J(T) - self.cfg.c0
        return abs(main_term_g(self.phi1(T)) - target) / abs(target)

    def phi1_iter(self, T, k: int):
        """phi_1^k(T); every argument passed to phi_1 must stay >= T0."""
        if int(k) != k or k < 0:
            raise DomainError("k must be a nonnegative integer")
        out = np.asarray(T, dtype=float)
        for step in range(1, int(k) + 1):
            if np.any(out < self.cfg.T0):
                raise IterationDepthError(
                    f"iterate {step - 1} = {np.min(out):g} fell below T0 = {self.cfg.T0:g} "
                    f"before step {step}", step)
            out = np.asarray(self.phi1(out))
        return float(out) if out.ndim == 0 else out

    def omega(self, t):
        """omega(t) = ln phi_1(t) + 1 + c - ln 2 pi."""
        out = np.log(np.asarray(self.phi1(t))) + 1.0 + BETA
        return float(out) if np.ndim(out) == 0 else out

    def tilde_z_sq(self, t):
        """d phi_1 / dt = |zeta(1/2+it)|^2 / omega(t)."""
        out = np.asarray(zeta_mod_sq(t)) / np.asarray(self.omega(t))
        return float(out) if out.ndim == 0 else out

    def phi1_and_density(self, t):
        """(phi_1(t), d phi_1/dt) sharing one evaluation of phi_1."""
        phi = np.asarray(self.phi1(t))
        return phi, np.asarray(zeta_mod_sq(t)) / (np.log(phi) + 1.0 + BETA)

    def reverse_step(self, T: float, method: str = DEFAULT_METHOD) -> float:
        """X = [T]^1 > T by the chosen method; memoised."""
        if method not in METHODS:
            raise DomainError(f"method must be one of {METHODS}, got {method!r}")
        T = float(T)
        self._check_floor(T)
        key = (T, method)
        if key not in self._reverse:
            self._reverse[key] = self._solve_reverse(T, method)
        return self._reverse[key]

    def _solve_reverse(self, T: float, method: str) -> float:
        if method == "mainterm-invert":
            target = main_term_g(T) + self.cfg.c0
        else:
            target = self.J(T) + ONE_MINUS_C * T
        cap = self.integrator.t_cap
        step = ONE_MINUS_C * T / math.log(T)
        lo, hi = T + 0.5 * step, T + 2.0 * step

        def h(x):
            return self.J(x) - target

        for _ in range(60):
            hi = min(hi, cap)
            f_lo, f_hi = h(lo), h(hi)
            if f_lo <= 0.0 <= f_hi:
                break
            if f_lo > 0.0:
                lo = T + 0.5 * (lo - T)
            if f_hi < 0.0:
                if hi >= cap:
                    raise BracketError(f"reverse step from T={T:g} leaves the height cap {cap:g}", (lo, hi))
                hi = T + 2.0 * (hi - T)
        else:
            raise BracketError(f"could not bracket reverse step from T={T:g}", (lo, hi))
        if f_lo == 0.0:
            return lo
        if f_hi == 0.0:
            return hi
        x = brentq(h, lo, hi, xtol=4 * np.finfo(float).eps * hi, rtol=4 * np.finfo(float).eps, maxiter=200)
        scale = ONE_MINUS_C * T
        if abs(h(x)) > self.cfg.tol * scale:
            raise BracketError(f"reverse step residual {abs(h(x)) / scale:.3g} above tol", (lo, hi))
        return float(x)

    def reverse_iter(self, T: float, r: int, method: str = DEFAULT_METHOD) -> float:
        """T^r = phi_1^{-r}(T)."""
        out = float(T)
        for _ in range(int(r)):
            out = self.reverse_step(out, method)
        return out

    def build_chain(self, T: float, k: int, method: str = DEFAULT_METHOD) -> LadderChain:
        """Reverse iterates T^1..T^k with their |zeta|^2 increments."""
        if int(k) != k or k < 0:
            raise DomainError("k must be a nonnegative integer")
        if k > self.cfg.k_max:
            raise DomainError(f"k = {k} exceeds k_max = {self.cfg.k_max}")
        self._check_floor(T)
        levels = [float(T)]
        for _ in range(int(k)):
            levels.append(self.reverse_step(levels[-1], method))
        incs = tuple(self.integrator.increment(a, b) for a, b in zip(levels[:-1], levels[1:]))
        gaps = tuple(b - a for a, b in zip(levels[:-1], levels[1:]))
        res = tuple(inc.value / (ONE_MINUS_C * a) - 1.0 for inc, a in zip(incs, levels[:-1]))
        return LadderChain(float(T), tuple(levels[1:]), gaps, incs, method, res)


_LADDERS: dict[tuple, JacobLadder] = {}


def get_ladder(cfg: LadderConfig | None = None) -> JacobLadder:
    """Shared ladder per configuration, so memoised reverse steps are reused."""
    cfg = cfg or LadderConfig()
    key = (cfg, id(get_integrator(cfg.hl_tol, t_cap=cfg.t_cap)))
    if key not in _LADDERS:
        _LADDERS[key] = JacobLadder(cfg)
    return _LADDERS[key]


def phi1(T, cfg: LadderConfig | None = None):
    return get_ladder(cfg).phi1(T)


def phi1_iter(T, k: int, cfg: LadderConfig | None = None):
    return get_ladder(cfg).phi1_iter(T, k)


def reverse_step(T: float, cfg: LadderConfig | None = None, method: str = DEFAULT_METHOD) -> float:
    return get_ladder(cfg).reverse_step(T, method)


def build_chain(T: float, k: int, cfg: LadderConfig | None = None, method: str = DEFAULT_METHOD) -> LadderChain:
    return get_ladder(cfg).build_chain(T, k, method)


def tilde_z_sq(t, cfg: LadderConfig | None = None):
    return get_ladder(cfg).tilde_z_sq(t)


def gap_ratio(T: float, T1: float) -> float:
    """(T^1 - T) ln T / ((1 - c) T); tends to 1."""
    return (T1 - T) * math.log(T) / (ONE_MINUS_C * T)


def fit_exponent(xs, ys) -> float:
    """Least-squares slope of ln|y| against ln x."""
    x = np.log(np.asarray(xs, dtype=float))
    y = np.log(np.abs(np.asarray(ys, dtype=float)))
    return float(np.polyfit(x, y, 1)[0])
