"""Continuous tracking of S(t) = arg zeta(1/2 + it) / pi and its integral S_1.

On the critical line zeta(1/2 + it) = exp(-i theta(t)) Z(t) with Z real, so the
argument changes continuously through -theta(t) and jumps by pi at each sign
change of Z.  The track samples Z densely enough that theta moves by at most
pi/3 between samples, refines every sign change to a zero, and counts from the
anchor t = 10 where S is known.  At a zero the midpoint value is used, which
keeps every step of S strictly below 1/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.optimize.elementwise import find_root

from .errors import BranchLossError, CoverageError, DomainError, ResourceError
from .zeta import TWO_PI, _theta_any, hardy_z

#: height at which S is anchored to its known value
ANCHOR_T = 10.0
#: S(10) = -theta(10)/pi - 1 (no zeros below 14.13)
S_ANCHOR = -0.0237198979997449437959825471469
#: cap on the sampling step, in units of t
MAX_STEP = 1.0
DEFAULT_BUDGET = 20_000_000

# Gauss-Legendre rules on [0, 1]
_GL4_X, _GL4_W = np.polynomial.legendre.leggauss(4)
_GL4_X, _GL4_W = 0.5 * (_GL4_X + 1.0), 0.5 * _GL4_W
_GL24_X, _GL24_W = np.polynomial.legendre.leggauss(24)
_GL24_X, _GL24_W = 0.5 * (_GL24_X + 1.0), 0.5 * _GL24_W


@dataclass(frozen=True, eq=False)
class PhaseTrack:
    """Grid of heights with S and S_1 aligned to it.

    ``s_values`` holds the midpoint convention at zeros; ``s_right`` the value
    just to the right of each grid point.  ``s1_values[0]`` is S_1(anchor_t),
    an explicit offset carried from 0.
    """

    grid: np.ndarray
    s_values: np.ndarray
    s1_values: np.ndarray
    anchor_t: float
    s_right: np.ndarray
    theta_values: np.ndarray
    is_zero: np.ndarray
    tol: float
    evals: int
    suspicious: tuple = field(default=())

    @property
    def zeros(self) -> np.ndarray:
        return self.grid[self.is_zero]

    @property
    def t_end(self) -> float:
        return float(self.grid[-1])

    def n_values(self) -> np.ndarray:
        """N(t) = theta/pi + 1 + S at each grid point (k - 1/2 at the k-th zero)."""
        return self.theta_values / math.pi + 1.0 + self.s_values


def _gl_theta_integral(a, b, rule=(_GL4_X, _GL4_W)):
    """int_a^b (theta(t) - theta(a)) dt for arrays a <= b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x, w = rule
    h = b - a
    nodes = a[..., None] + h[..., None] * x
    th = _theta_any(nodes) - _theta_any(a)[..., None]
    return h * (th @ w)


def s1_head(t):
    """S_1(t) for 0 <= t <= 10, where S(t) = -theta(t)/pi - 1."""
    t = np.asarray(t, dtype=float)
    if np.any((t < 0) | (t > ANCHOR_T)):
        raise DomainError("s1_head needs 0 <= t <= 10")
    # theta has singularities at t = +-i/2, so integrate over unit panels
    k = np.minimum(np.floor(t), ANCHOR_T - 1.0)
    out = _HEAD_PREFIX[k.astype(int)] + _head_panel(k, t)
    return float(out) if out.ndim == 0 else out


def _head_panel(a, b):
    a = np.asarray(a, dtype=float)
    h = np.asarray(b, dtype=float) - a
    nodes = a[..., None] + h[..., None] * _GL24_X
    return h * ((-_theta_any(nodes) / math.pi - 1.0) @ _GL24_W)


_HEAD_PREFIX = np.concatenate([[0.0], np.cumsum(_head_panel(np.arange(10.0), np.arange(1.0, 11.0)))])


def samples_per_gap(tol: float) -> int:
    """Grid density: samples per mean zero spacing for a given tolerance."""
    return int(np.clip(math.ceil(-math.log10(tol)), 3, 10))


def _sample_grid(t_start: float, t_end: float, m: int) -> np.ndarray:
    """Deterministic grid with at least m samples per mean gap 2 pi / ln(t / 2 pi)."""
    pieces = []
    a = t_start
    while a < t_end:
        b = min(t_end, a + 64.0)
        gap = TWO_PI / math.log(max(b, TWO_PI * math.e) / TWO_PI)
        h = min(MAX_STEP, gap / m)
        n = max(1, math.ceil((b - a) / h))
        pieces.append(a + (b - a) * np.arange(n) / n)
        a = b
    pieces.append(np.array([t_end]))
    return np.concatenate(pieces)


def _refine_zeros(lo, hi, xtol):
    if lo.size == 0:
        return lo, 0
    res = find_root(hardy_z, (lo, hi), tolerances=dict(xatol=xtol, xrtol=0.0))
    return np.asarray(res.x, dtype=float), int(np.sum(res.nfev))


def _missed_pairs(t, z, xtol):
    """Look for two close zeros hidden between samples of equal sign.

    Every interior local minimum of |Z| without a sign change is examined with
    a bounded minimisation; if Z crosses zero there both zeros are refined.
    """
    found, suspicious, evals = [], [], 0
    az = np.abs(z)
    same = (np.sign(z[:-2]) == np.sign(z[1:-1])) & (np.sign(z[1:-1]) == np.sign(z[2:]))
    dip = same & (az[1:-1] < az[:-2]) & (az[1:-1] < az[2:])
    for i in np.flatnonzero(dip) + 1:
        sgn = 1.0 if z[i] > 0 else -1.0
        lo, hi = t[i - 1], t[i + 1]
        res = minimize_scalar(lambda u: sgn * float(hardy_z(u)), bounds=(lo, hi), method="bounded",
                              options={"xatol": xtol})
        evals += int(res.nfev)
        if res.fun < 0.0:
            r, n = _refine_zeros(np.array([lo, res.x]), np.array([res.x, hi]), xtol)
            found.extend(r.tolist())
            evals += n
        elif res.fun < 1e-6:
            suspicious.append(float(res.x))
    return np.array(found), suspicious, evals


def _track_from_anchor(t_end: float, tol: float, budget: int):
    m = samples_per_gap(tol)
    t = _sample_grid(ANCHOR_T, t_end, m)
    if t.size > budget:
        raise ResourceError(f"phase track to t={t_end:g} needs {t.size} samples, budget {budget}")
    z = hardy_z(t)
    evals = t.size
    xtol = tol / 4.0
    change = np.flatnonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0)
    exact = np.flatnonzero(z == 0.0)
    zeros, n = _refine_zeros(t[change], t[change + 1], xtol)
    evals += n
    pairs, suspicious, n = _missed_pairs(t, z, xtol)
    evals += n
    if evals > budget:
        raise ResourceError(f"phase track evaluation budget {budget} exceeded ({evals})")
    zeros = np.unique(np.concatenate([zeros, pairs, t[exact]]))
    grid = np.union1d(t, zeros)
    is_zero = np.isin(grid, zeros)
    # adjacent zeros need a separating sample, otherwise S would step by ~1
    both = np.flatnonzero(is_zero[:-1] & is_zero[1:])
    if both.size:
        grid = np.union1d(grid, 0.5 * (grid[both] + grid[both + 1]))
        is_zero = np.isin(grid, zeros)
    # zeros strictly before each grid point, plus one half at a zero
    before = np.cumsum(is_zero) - is_zero
    theta_v = _theta_any(grid)
    s = S_ANCHOR + before + 0.5 * is_zero - (theta_v - theta_v[0]) / math.pi
    s_right = s + 0.5 * is_zero
    dt = np.diff(grid)
    inc = s_right[:-1] * dt - _gl_theta_integral(grid[:-1], grid[1:]) / math.pi
    s1 = np.cumsum(np.concatenate([[float(s1_head(ANCHOR_T))], inc]))
    return grid, s, s_right, s1, theta_v, is_zero, evals, tuple(suspicious)


def _check_track(grid, s, theta_v, is_zero):
    steps = np.abs(np.diff(s))
    if steps.size and steps.max() >= 0.5:
        i = int(np.argmax(steps))
        raise BranchLossError(f"|dS| = {steps[i]:.3g} between t={grid[i]:.12g} and t={grid[i + 1]:.12g}")
    n = theta_v / math.pi + 1.0 + s
    target = np.where(is_zero, np.round(n - 0.5) + 0.5, np.round(n))
    if np.any(np.abs(n - target) > 1e-6) or np.any(np.diff(target) < 0):
        raise BranchLossError("N(t) lost integrality along the track")


def build_phase_track(t_start: float, t_end: float, tol: float = 1e-6, *, budget: int = DEFAULT_BUDGET) -> PhaseTrack:
    """Track S and S_1 on [t_start, t_end], t_start >= 10.

    Zeros are located to within tol/4; ``budget`` bounds the number of Z
    evaluations (ResourceError beyond it).
    """
    t_start, t_end = float(t_start), float(t_end)
    if not t_start >= ANCHOR_T:
        raise DomainError(f"t_start must be >= {ANCHOR_T}, got {t_start}")
    if t_end < t_start:
        raise DomainError("t_end must be >= t_start")
    if not tol > 0:
        raise DomainError("tol must be positive")
    if t_end == ANCHOR_T:
        grid = np.array([ANCHOR_T])
        theta_v = _theta_any(grid)
        s = np.array([S_ANCHOR])
        return _freeze(grid, s, s.copy(), np.array([float(s1_head(ANCHOR_T))]), theta_v,
                       np.zeros(1, bool), tol, 0, ())
    grid, s, s_right, s1, theta_v, is_zero, evals, susp = _track_from_anchor(t_end, tol, budget)
    _check_track(grid, s, theta_v, is_zero)
    if t_start > ANCHOR_T:
        i = int(np.searchsorted(grid, t_start, side="left"))
        if grid[i] != t_start:
            # split the interval containing t_start
            head = PhaseTrack(grid, s, s1, ANCHOR_T, s_right, theta_v, is_zero, tol, evals)
            s0 = float(s_of_t(head, t_start))
            s10 = float(s1_of_t(head, t_start))
            grid = np.concatenate([[t_start], grid[i:]])
            s = np.concatenate([[s0], s[i:]])
            s_right = np.concatenate([[s0], s_right[i:]])
            s1 = np.concatenate([[s10], s1[i:]])
            theta_v = np.concatenate([[_theta_any(t_start)], theta_v[i:]])
            is_zero = np.concatenate([[False], is_zero[i:]])
        else:
            grid, s, s_right, s1 = grid[i:], s[i:], s_right[i:], s1[i:]
            theta_v, is_zero = theta_v[i:], is_zero[i:]
        if t_end == t_start:
            grid, s, s_right, s1, theta_v, is_zero = (a[:1] for a in (grid, s, s_right, s1, theta_v, is_zero))
    return _freeze(grid, s, s_right, s1, theta_v, is_zero, tol, evals, susp)


def _freeze(grid, s, s_right, s1, theta_v, is_zero, tol, evals, susp) -> PhaseTrack:
    arrays = [np.array(a) for a in (grid, s, s1, s_right, theta_v, is_zero)]
    for a in arrays:
        a.setflags(write=False)
    grid, s, s1, s_right, theta_v, is_zero = arrays
    return PhaseTrack(grid, s, s1, float(grid[0]), s_right, theta_v, is_zero, float(tol), int(evals), susp)


def _locate(track: PhaseTrack, t: np.ndarray) -> np.ndarray:
    if np.any((t < track.grid[0]) | (t > track.grid[-1])):
        raise CoverageError(f"t outside track range [{track.grid[0]:g}, {track.grid[-1]:g}]")
    return np.clip(np.searchsorted(track.grid, t, side="right") - 1, 0, track.grid.size - 1)


def s_of_t(track: PhaseTrack, t):
    """S(t) on the track; at a zero the midpoint of the jump is returned."""
    arr = np.asarray(t, dtype=float)
    i = _locate(track, arr)
    on_grid = track.grid[i] == arr
    th = _theta_any(arr)
    out = np.where(on_grid, track.s_values[i], track.s_right[i] - (th - track.theta_values[i]) / math.pi)
    return float(out) if out.ndim == 0 else out


def s1_of_t(track: PhaseTrack, t):
    """S_1(t) = int_0^t S on the track range, or on [0, 10] for an anchored track."""
    arr = np.asarray(t, dtype=float)
    out = np.empty(arr.shape)
    low = arr < track.grid[0]
    if np.any(low):
        if track.anchor_t != ANCHOR_T:
            raise CoverageError("t below the track start")
        out[low] = s1_head(arr[low])
    hi = ~low
    if np.any(hi):
        th = arr[hi]
        i = _locate(track, th)
        g = track.grid[i]
        out[hi] = (track.s1_values[i] + track.s_right[i] * (th - g)
                   - _gl_theta_integral(g, th) / math.pi)
    return float(out) if out.ndim == 0 else out
