"""Adaptive Gauss-Kronrod quadrature for critical-line integrands.

``integrate`` is a general globally adaptive G7-K15 scheme.  The Hardy-Littlewood
integral J(T) = int_0^T |zeta(1/2+it)|^2 dt has its own integrator: [0, T] is cut
into unit blocks, each block into panels no longer than the local mean zero
spacing, and the block integrals are accumulated into a prefix table so that
J at any point costs one partial panel.  Blocks are produced in fixed aligned
chunks, which makes every value independent of the order of queries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cache import SampleCache, resolve_cache_dir
from .errors import CoverageError, DomainError, RangeCapError
from .phase import ANCHOR_T, PhaseTrack, s1_of_t
from .zeta import TWO_PI, hardy_z

EULER_GAMMA = 0.57721566490153286061
ONE_MINUS_C = 0.42278433509846713939
DEFAULT_T_CAP = 1.0e6
HL_TOL = 1e-6
MOMENT_TOL = 1e-4

# QUADPACK G7-K15 abscissae and weights on [-1, 1]
_XK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
GK_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
GK_WK = np.concatenate([_WK[:-1], _WK[::-1]])
GK_WG = np.zeros(15)
GK_WG[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])
GK_WDIFF = GK_WK - GK_WG


@dataclass(frozen=True)
class IntegralResult:
    """A definite integral over ``interval`` with its error estimate."""

    value: float
    err_est: float
    evals: int
    interval: tuple[float, float]
    converged: bool = True

    def __post_init__(self):
        a, b = self.interval
        if b < a:
            raise DomainError(f"interval ({a}, {b}) is reversed")
        if not np.all(np.asarray(self.err_est) >= 0):
            raise DomainError("err_est must be nonnegative")


def gk15_panels(a, b, f):
    """Apply G7-K15 to panels [a_i, b_i]; returns (values, errors, evals).

    ``f`` maps a 1-d array of abscissae to an array whose first axis matches it
    (extra axes make the integrand vector valued).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    nodes = c[:, None] + h[:, None] * GK_NODES
    vals = np.asarray(f(nodes.ravel()), dtype=float)
    vals = vals.reshape(nodes.shape + vals.shape[1:])
    kron = np.einsum("pn...,n->p...", vals, GK_WK) * h.reshape((-1,) + (1,) * (vals.ndim - 2))
    diff = np.einsum("pn...,n->p...", vals, GK_WDIFF) * h.reshape((-1,) + (1,) * (vals.ndim - 2))
    err = np.abs(diff)
    if err.ndim > 1:
        err = err.reshape(err.shape[0], -1).max(axis=1)
    return kron, err, nodes.size


def _ordered_sum(values: np.ndarray):
    """Sum panel values in panel order with compensated summation."""
    if values.ndim == 1:
        return math.fsum(values.tolist())
    flat = values.reshape(values.shape[0], -1)
    out = np.array([math.fsum(flat[:, j].tolist()) for j in range(flat.shape[1])])
    return out.reshape(values.shape[1:])


def integrate(f: Callable, a: float, b: float, tol: float = 1e-10, *, max_evals: int = 2_000_000,
              panels: int = 1, max_width: float | Callable[[float], float] | None = None,
              breakpoints=None) -> IntegralResult:
    """Globally adaptive G7-K15 integration of a vectorised ``f`` over [a, b].

    Stops when the summed error estimate is at most max(tol*|value|, tol).  The
    initial panels are no wider than ``max_width`` (a number or a function of
    the position, e.g. the local oscillation scale) and always break at the
    given ``breakpoints``.  Exhausting ``max_evals`` returns the partial result
    with ``converged=False``.
    """
    a, b = float(a), float(b)
    if b < a:
        raise DomainError(f"integrate needs a <= b, got ({a}, {b})")
    if a == b:
        probe = np.asarray(f(np.array([a])), dtype=float)
        zero = 0.0 if probe.ndim == 1 else np.zeros(probe.shape[1:])
        return IntegralResult(zero, 0.0, 0, (a, b))
    edges = _initial_edges(a, b, panels, max_width)
    if breakpoints is not None:
        bp = np.asarray(breakpoints, dtype=float)
        edges = np.union1d(edges, bp[(bp > a) & (bp < b)])
    lo, hi = edges[:-1], edges[1:]
    vals, errs, evals = gk15_panels(lo, hi, f)
    min_width = 64 * np.finfo(float).eps * max(abs(a), abs(b), 1.0)
    while True:
        total = _ordered_sum(vals)
        err = math.fsum(errs.tolist())
        target = max(tol * float(np.max(np.abs(total))), tol)
        if err <= target:
            return IntegralResult(total, err, evals, (a, b), True)
        share = target * (hi - lo) / (b - a)
        split = (errs > share) & (hi - lo > min_width)
        if not np.any(split):
            return IntegralResult(total, err, evals, (a, b), False)
        if evals + 30 * int(split.sum()) > max_evals:
            return IntegralResult(total, err, evals, (a, b), False)
        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[split], mid])
        new_hi = np.concatenate([mid, hi[split]])
        nv, ne, n = gk15_panels(new_lo, new_hi, f)
        evals += n
        keep = ~split
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])
        order = np.argsort(lo, kind="stable")
        lo, hi, vals, errs = lo[order], hi[order], vals[order], errs[order]


def _initial_edges(a, b, panels, max_width):
    if max_width is None:
        return np.linspace(a, b, max(1, int(panels)) + 1)
    if not callable(max_width):
        n = max(int(panels), math.ceil((b - a) / float(max_width)))
        return np.linspace(a, b, n + 1)
    edges = [a]
    while edges[-1] < b:
        edges.append(min(b, edges[-1] + float(max_width(edges[-1]))))
    edges = np.array(edges)
    if panels > edges.size - 1:
        edges = np.linspace(a, b, int(panels) + 1)
    return edges


def oscillation_scale(t: float) -> float:
    """Mean spacing of the zeros of Z near height t, 2 pi / ln(t / 2 pi)."""
    return TWO_PI / math.log(max(t, TWO_PI * math.e) / TWO_PI)


# ---------------------------------------------------------------------------
# Hardy-Littlewood integral


def _mod_sq(t):
    z = hardy_z(t)
    return z * z


class HLIntegrator:
    """Prefix table of J(T) on unit blocks, extended on demand.

    Each block is split into ``n`` equal base panels with ``n`` chosen per
    chunk so a panel never exceeds the mean zero spacing.  A block whose
    K15-G7 error exceeds ``tol * max(|block|, 1)`` is re-integrated with twice
    as many panels, up to ``REFINE_LIMIT`` times the base count.  Base-panel
    samples go through the optional disk cache.
    """

    CHUNK = 256
    REFINE_LIMIT = 64

    def __init__(self, tol: float = HL_TOL, cache: SampleCache | None = None, t_cap: float = DEFAULT_T_CAP):
        if not tol > 0:
            raise DomainError("tol must be positive")
        self.tol = float(tol)
        self.cache = cache
        self.t_cap = float(t_cap)
        self.evals = 0
        self._prefix = np.zeros(1)
        self._block_err = np.zeros(0)
        self._block_evals = np.zeros(0, dtype=np.int64)
        self._block_ok = np.zeros(0, dtype=bool)
        self._chunk_n: list[int] = []
        self._chunk_cum: list[np.ndarray] = []
        self._refined: dict[int, np.ndarray] = {}

    # -- table construction -------------------------------------------------

    @classmethod
    def chunk_panels(cls, chunk: int) -> int:
        t_top = float((chunk + 1) * cls.CHUNK)
        return max(1, math.ceil(math.log(max(t_top, TWO_PI * math.e) / TWO_PI) / TWO_PI))

    @classmethod
    def chunk_nodes(cls, chunk: int) -> np.ndarray:
        """Abscissae of the base panels of a chunk, panel by panel."""
        n = cls.chunk_panels(chunk)
        j0 = chunk * cls.CHUNK
        starts = (j0 + np.arange(cls.CHUNK)[:, None] + np.arange(n)[None, :] / n).ravel()
        h = 0.5 / n
        return ((starts + h)[:, None] + h * GK_NODES).ravel()

    def _chunk_samples(self, chunk: int) -> np.ndarray:
        nodes = self.chunk_nodes(chunk)
        j0, j1 = float(chunk * self.CHUNK), float((chunk + 1) * self.CHUNK)
        if self.cache is not None:
            z = self.cache.load(j0, j1, self.tol, expected_t=nodes)
            if z is not None:
                return z
        z = hardy_z(nodes)
        self.evals += nodes.size
        if self.cache is not None:
            self.cache.store(j0, j1, self.tol, nodes, z)
        return z

    def _block_panels(self, j: int, n: int):
        edges = j + np.arange(n + 1) / n
        vals, errs, evals = gk15_panels(edges[:-1], edges[1:], _mod_sq)
        self.evals += evals
        return vals, errs, evals

    def _add_chunk(self) -> None:
        chunk = len(self._chunk_n)
        n = self.chunk_panels(chunk)
        z = self._chunk_samples(chunk).reshape(self.CHUNK, n, 15)
        f = z * z
        h = 0.5 / n
        vals = h * (f @ GK_WK)
        errs = h * np.abs(f @ GK_WDIFF)
        cum = np.concatenate([np.zeros((self.CHUNK, 1)), np.cumsum(vals, axis=1)], axis=1)
        block = cum[:, -1].copy()
        berr = errs.sum(axis=1)
        bevals = np.full(self.CHUNK, 15 * n, dtype=np.int64)
        ok = np.ones(self.CHUNK, dtype=bool)
        j0 = chunk * self.CHUNK
        bad = np.flatnonzero(berr > self.tol * np.maximum(np.abs(block), 1.0))
        for i in bad:
            m = 2 * n
            while True:
                pv, pe, ev = self._block_panels(j0 + int(i), m)
                bevals[i] += ev
                good = pe.sum() <= self.tol * max(abs(pv.sum()), 1.0)
                if good or m >= self.REFINE_LIMIT * n:
                    break
                m *= 2
            self._refined[j0 + int(i)] = np.concatenate([[0.0], np.cumsum(pv)])
            block[i] = self._refined[j0 + int(i)][-1]
            berr[i] = pe.sum()
            ok[i] = good
        self._chunk_n.append(n)
        self._chunk_cum.append(cum)
        seq = np.cumsum(np.concatenate([[self._prefix[-1]], block]))
        self._prefix = np.concatenate([self._prefix, seq[1:]])
        self._block_err = np.concatenate([self._block_err, berr])
        self._block_evals = np.concatenate([self._block_evals, bevals])
        self._block_ok = np.concatenate([self._block_ok, ok])

    def _ensure(self, t_max: float) -> None:
        need = int(math.floor(t_max)) + 1
        while self._prefix.size - 1 < need:
            self._add_chunk()

    def warm(self, t_start: float, t_end: float) -> None:
        self._check_range(t_start, t_end)
        self._ensure(t_end)

    def _check_range(self, a: float, b: float) -> None:
        if a < 0:
            raise DomainError(f"J(t) needs t >= 0, got {a}")
        if b > self.t_cap:
            raise RangeCapError(f"upper endpoint {b:g} exceeds the height cap {self.t_cap:g}", self.t_cap)

    # -- queries ------------------------------------------------------------

    def _partial(self, t: np.ndarray):
        """(value, err) of the integral from floor(t) to t, plus base offsets."""
        j = np.floor(t).astype(np.int64)
        frac = t - j
        chunk = j // self.CHUNK
        start = np.empty_like(t)
        before = np.empty_like(t)
        for c in np.unique(chunk):
            sel = chunk == c
            n = self._chunk_n[c]
            k = np.minimum(np.floor(frac[sel] * n), n - 1).astype(np.int64)
            start[sel] = j[sel] + k / n
            before[sel] = self._chunk_cum[c][j[sel] - c * self.CHUNK, k]
        for idx in np.flatnonzero(np.isin(j, np.fromiter(self._refined, dtype=np.int64, count=len(self._refined)))):
            cum = self._refined[int(j[idx])]
            m = cum.size - 1
            k = min(int(math.floor(frac[idx] * m)), m - 1)
            start[idx] = j[idx] + k / m
            before[idx] = cum[k]
        value = np.zeros_like(t)
        err = np.zeros_like(t)
        live = t > start
        if np.any(live):
            v, e, ev = gk15_panels(start[live], t[live], _mod_sq)
            self.evals += ev
            value[live] = v
            err[live] = e
        return self._prefix[j] + before + value, err

    def J(self, t):
        """J(t) = int_0^t |zeta(1/2+iu)|^2 du; scalar or array."""
        arr = np.asarray(t, dtype=float)
        flat = arr.ravel()
        if flat.size == 0:
            return np.zeros(arr.shape)
        self._check_range(float(flat.min()), float(flat.max()))
        self._ensure(float(flat.max()))
        out, _ = self._partial(flat)
        out = out.reshape(arr.shape)
        return float(out) if out.ndim == 0 else out

    def increment(self, a: float, b: float) -> IntegralResult:
        """J(b) - J(a) as an IntegralResult."""
        a, b = float(a), float(b)
        if b < a:
            raise DomainError(f"hl_integral needs a <= b, got ({a}, {b})")
        if a == b:
            return IntegralResult(0.0, 0.0, 0, (a, b))
        self._check_range(a, b)
        self._ensure(b)
        v, e = self._partial(np.array([a, b]))
        ja, jb = int(math.floor(a)), int(math.floor(b))
        blocks = slice(ja, max(jb, ja + 1))
        err = float(self._block_err[blocks].sum() + e.sum())
        evals = int(self._block_evals[blocks].sum()) + 30
        ok = bool(self._block_ok[blocks].all())
        return IntegralResult(float(v[1] - v[0]), err, evals, (a, b), ok)


_REGISTRY: dict[tuple, HLIntegrator] = {}


def get_integrator(tol: float = HL_TOL, cache_dir: str | None = None, t_cap: float = DEFAULT_T_CAP) -> HLIntegrator:
    """Process-wide shared integrator for a (tol, cache dir, cap) configuration."""
    directory = resolve_cache_dir(cache_dir)
    key = (float(tol), str(directory) if directory else None, float(t_cap))
    if key not in _REGISTRY:
        cache = SampleCache(directory) if directory else None
        _REGISTRY[key] = HLIntegrator(tol, cache=cache, t_cap=t_cap)
    return _REGISTRY[key]


def hl_integral(a: float, b: float, tol: float = HL_TOL, *, integrator: HLIntegrator | None = None) -> IntegralResult:
    """int_a^b |zeta(1/2+it)|^2 dt with relative error about ``tol``."""
    integ = integrator if integrator is not None else get_integrator(tol)
    return integ.increment(a, b)


def warm_cache(t_start: float, t_end: float, tol: float, cache_dir) -> int:
    """Write the base-panel samples covering [t_start, t_end]; returns samples written."""
    if t_end < t_start or t_start < 0:
        raise DomainError("cache warm range must satisfy 0 <= t_start <= t_end")
    if t_end > DEFAULT_T_CAP:
        raise RangeCapError(f"t_end {t_end:g} exceeds the height cap", DEFAULT_T_CAP)
    cache = SampleCache(cache_dir)
    written = 0
    first = int(t_start // HLIntegrator.CHUNK)
    last = int(math.floor(t_end) // HLIntegrator.CHUNK)
    for chunk in range(first, last + 1):
        nodes = HLIntegrator.chunk_nodes(chunk)
        j0, j1 = float(chunk * HLIntegrator.CHUNK), float((chunk + 1) * HLIntegrator.CHUNK)
        if cache.contains(j0, j1, tol, nodes):
            continue
        written += cache.store(j0, j1, tol, nodes, hardy_z(nodes))
    return written


def ingham_main_term(T):
    """T ln(T / 2 pi) + (2c - 1) T."""
    T = np.asarray(T, dtype=float)
    out = T * np.log(T / TWO_PI) + (2.0 * EULER_GAMMA - 1.0) * T
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Selberg moments


def s1_moment(track: PhaseTrack, a: float, b: float, l: int, tol: float = MOMENT_TOL,
              *, max_evals: int = 20_000_000) -> IntegralResult:
    """int_a^b |S_1(t)|^(2l) dt.

    S_1 is smooth between consecutive track points, so the track grid supplies
    the breakpoints.  On a track anchored at t = 10 the range may start below
    it; [0, 10] is then integrated with the explicit low-height formula.
    """
    a, b = float(a), float(b)
    if int(l) != l or l < 1:
        raise DomainError("l must be a positive integer")
    if b < a:
        raise DomainError(f"s1_moment needs a <= b, got ({a}, {b})")
    lowest = 0.0 if track.anchor_t == ANCHOR_T else track.anchor_t
    if a < lowest or b > track.t_end:
        raise CoverageError(f"[{a:g}, {b:g}] leaves the track range [{lowest:g}, {track.t_end:g}]")
    if a == b:
        return IntegralResult(0.0, 0.0, 0, (a, b))
    inner = track.grid[(track.grid > a) & (track.grid < b)]
    extra = [ANCHOR_T] if a < ANCHOR_T < b else []
    head = np.arange(math.floor(a) + 1.0, min(b, ANCHOR_T)) if a < ANCHOR_T else np.zeros(0)
    edges = np.concatenate([inner, extra, head])
    power = 2 * int(l)

    def f(t):
        return np.abs(s1_of_t(track, t)) ** power

    return integrate(f, a, b, tol, max_evals=max_evals, breakpoints=edges)
