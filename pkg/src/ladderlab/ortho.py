"""Legendre systems generated by the ladder.

For p >= 1 the affine map A_p sends [-1, 1] onto [T^p, (T+2)^p] (reverse
iterates of T and T + 2), and

    u_p(t) = phi_1^p(A_p(t)) - T - 1,     v_p^r(t) = phi_1^r(A_p(t))

makes u_p an increasing automorphism of [-1, 1].  By the chain rule
u_p' = A_p' prod_r Z~^2(v_p^r), so the members

    P_n(u_{p1}(u_{p2}(u_{p3}(t)))) * prod |Z~(v ...)|

are orthogonal on [-1, 1] with squared norms 2/(2n+1) times
prod_i 2 / ((T+2)^{p_i} - T^{p_i}).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError, LadderConsistencyError
from .ladder import DEFAULT_METHOD, JacobLadder, LadderConfig, get_ladder
from .quadrature import integrate

CONTAINMENT_RTOL = 1e-12


class IdentityLadder:
    """Test double: phi_1 is the identity, so every generation is the plain Legendre system."""

    def __init__(self, cfg: LadderConfig | None = None):
        self.cfg = cfg or LadderConfig()

    def phi1(self, t):
        return t

    def phi1_and_density(self, t):
        t = np.asarray(t, dtype=float)
        return t, np.ones_like(t)

    def reverse_iter(self, T: float, r: int, method: str = DEFAULT_METHOD) -> float:
        return float(T)


@dataclass(frozen=True)
class GenerationSpec:
    """Base interval [T, T+2], the generation indices and the highest degree."""

    T: float
    p_list: tuple[int, ...]
    n_max: int
    ladder_cfg: LadderConfig = field(default_factory=LadderConfig)

    def __post_init__(self):
        object.__setattr__(self, "p_list", tuple(int(p) for p in self.p_list))
        if not self.T >= self.ladder_cfg.T0:
            raise ConfigError("T", f"must be >= T0 = {self.ladder_cfg.T0:g}")
        if not 1 <= len(self.p_list) <= 3:
            raise ConfigError("p_list", "needs one to three entries")
        if any(not 1 <= p <= self.ladder_cfg.k_max for p in self.p_list):
            raise ConfigError("p_list", f"entries must lie in [1, {self.ladder_cfg.k_max}]")
        if int(self.n_max) != self.n_max or self.n_max < 0:
            raise ConfigError("n_max", "must be a nonnegative integer")


@dataclass(frozen=True)
class GramReport:
    """Weighted Gram matrix of the generated members 0..n_max."""

    matrix: np.ndarray
    diag_scale: float
    max_offdiag_rel: float
    expected_scale: float
    max_asymmetry: float
    evals: int
    converged: bool

    @property
    def normalized_diagonal(self) -> np.ndarray:
        """G_nn (2n+1) / 2, constant (= diag_scale) for an orthogonal system."""
        n = np.arange(self.matrix.shape[0])
        return np.diag(self.matrix) * (2 * n + 1) / 2.0


def legendre_table(n_max: int, x) -> np.ndarray:
    """P_0..P_{n_max} at x by the three-term recurrence; shape (n_max+1,) + x.shape."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = x
    for n in range(1, n_max):
        out[n + 1] = ((2 * n + 1) * x * out[n] - n * out[n - 1]) / (n + 1)
    return out


class Generator:
    """Automorphisms u_p and members of the generated systems at base T."""

    def __init__(self, T: float, ladder: JacobLadder | IdentityLadder | None = None,
                 method: str = DEFAULT_METHOD):
        self.ladder = ladder if ladder is not None else get_ladder()
        self.T = float(T)
        self.method = method
        self._ends: dict[int, tuple[float, float]] = {}

    def endpoints(self, p: int) -> tuple[float, float]:
        """(T^p, (T+2)^p)."""
        if p not in self._ends:
            lo = self.ladder.reverse_iter(self.T, p, self.method)
            hi = self.ladder.reverse_iter(self.T + 2.0, p, self.method)
            self._ends[p] = (lo, hi)
        return self._ends[p]

    def affine(self, t, p: int):
        """Affine image of t in [-1, 1] on [T^p, (T+2)^p]."""
        t = np.asarray(t, dtype=float)
        if np.any(np.abs(t) > 1.0):
            raise DomainError("t must lie in [-1, 1]")
        lo, hi = self.endpoints(p)
        out = 0.5 * (hi - lo) * (t + 1.0) + lo
        return float(out) if out.ndim == 0 else out

    def _walk(self, t, p: int, r_stop: int):
        """Iterate phi_1 r_stop times from A_p(t), collecting the densities."""
        s = np.asarray(self.affine(t, p), dtype=float)
        density = np.ones_like(s)
        for r in range(r_stop):
            self._check_contained(s, p - r)
            s, d = self.ladder.phi1_and_density(s)
            density = density * d
            s = np.asarray(s, dtype=float)
        return s, density

    def _check_contained(self, s, level: int) -> None:
        lo, hi = self.endpoints(level) if level > 0 else (self.T, self.T + 2.0)
        slack = CONTAINMENT_RTOL * hi
        if np.any((s < lo - slack) | (s > hi + slack)):
            raise LadderConsistencyError(f"iterate left [{lo:.15g}, {hi:.15g}] at level {level}")

    def v(self, t, p: int, r: int):
        """v_p^r(t) = phi_1^r(A_p(t)), inside [T^{p-r}, (T+2)^{p-r}]."""
        if not 0 <= r <= p - 1:
            raise DomainError(f"need 0 <= r <= p-1, got r={r}, p={p}")
        s, _ = self._walk(t, p, r)
        self._check_contained(s, p - r)
        return float(s) if s.ndim == 0 else s

    def u(self, t, p: int):
        """u_p(t) = phi_1^p(A_p(t)) - T - 1."""
        s, _ = self._walk(t, p, p)
        self._check_contained(s, 0)
        out = s - self.T - 1.0
        return float(out) if out.ndim == 0 else out

    def composite(self, t, p_list):
        """(u_{p1}(...u_{pk}(t)), product of all |Z~|^2 factors)."""
        s = np.asarray(t, dtype=float)
        weight = np.ones_like(s)
        for p in reversed(tuple(p_list)):
            end, density = self._walk(s, p, p)
            weight = weight * density
            s = np.clip(end - self.T - 1.0, -1.0, 1.0)
        return s, weight

    def member(self, n: int, p_list, t):
        """The n-th generated member at t."""
        s, weight = self.composite(t, p_list)
        out = legendre_table(n, s)[n] * np.sqrt(weight)
        return float(out) if np.ndim(out) == 0 else out

    def gram(self, p_list, n_max: int, tol: float = 1e-8) -> GramReport:
        size = n_max + 1

        def integrand(t):
            s, weight = self.composite(t, p_list)
            P = legendre_table(n_max, s)
            return (P[:, None, :] * P[None, :, :] * weight).reshape(size * size, -1).T

        res = integrate(integrand, -1.0, 1.0, tol, panels=8)
        G = np.asarray(res.value).reshape(size, size)
        diag = np.diag(G)
        norm = np.sqrt(np.outer(diag, diag))
        off = ~np.eye(size, dtype=bool)
        max_off = float(np.max(np.abs(G[off]) / norm[off])) if size > 1 else 0.0
        n = np.arange(size)
        scale = float(np.mean(diag * (2 * n + 1) / 2.0))
        expected = math.prod(2.0 / (self.endpoints(p)[1] - self.endpoints(p)[0]) for p in p_list)
        return GramReport(G, scale, max_off, expected, float(np.max(np.abs(G - G.T))), res.evals, res.converged)


def _generator(T, cfg: LadderConfig | None) -> Generator:
    return Generator(T, get_ladder(cfg))


def affine_to_iterated(t, p: int, T: float, cfg: LadderConfig | None = None):
    return _generator(T, cfg).affine(t, p)


def u_p(t, p: int, T: float, cfg: LadderConfig | None = None):
    return _generator(T, cfg).u(t, p)


def v_p_r(t, p: int, r: int, T: float, cfg: LadderConfig | None = None):
    return _generator(T, cfg).v(t, p, r)


def generated_member(n: int, p_list, t, T: float, cfg: LadderConfig | None = None):
    return _generator(T, cfg).member(n, p_list, t)


def gram_matrix(spec: GenerationSpec, ladder=None, tol: float = 1e-8) -> GramReport:
    ladder = ladder if ladder is not None else get_ladder(spec.ladder_cfg)
    return Generator(spec.T, ladder).gram(spec.p_list, spec.n_max, tol)
