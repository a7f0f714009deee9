"""Critical-line evaluation of the Riemann zeta function.

Two kernels are provided:

* an Euler-Maclaurin summation of zeta(1/2 + it), accurate everywhere but with
  cost growing linearly in t; used below ``RS_SWITCH``;
* the Riemann-Siegel main sum plus fourteen remainder-correction terms,
  cost ~ sqrt(t); used above it.

Everything is vectorised over numpy arrays and deterministic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.special import bernoulli, loggamma

from ._rs_coeffs import RS_POLYS
from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061
ONE_MINUS_C = 0.42278433509846713939
TWO_PI = 2.0 * math.pi

#: below this height Z(t) is computed by Euler-Maclaurin summation
RS_SWITCH = 10.0
#: below this height theta(t) uses log-Gamma directly
THETA_SWITCH = 10.0

# B_2k / (2k)! for the Euler-Maclaurin tail
_EM_TERMS = 14
_B = bernoulli(2 * _EM_TERMS)
_EM_COEF = np.array([_B[2 * k] / math.factorial(2 * k) for k in range(1, _EM_TERMS + 1)])

# G_k has the parity of k: store G_k(p) = p^(k mod 2) H_k(p^2) as coefficients of H_k
_RS_DEG = max(len(poly) for poly in RS_POLYS) // 2 + 1
_RS_RE = np.zeros((len(RS_POLYS), _RS_DEG))
_RS_IM = np.zeros((len(RS_POLYS), _RS_DEG))
for _k, _poly in enumerate(RS_POLYS):
    _half = _poly[_k % 2 :: 2]
    _RS_RE[_k, : len(_half)] = [c[0] for c in _half]
    _RS_IM[_k, : len(_half)] = [c[1] for c in _half]
# sup over |p| <= 1 of |G_k(p)|, used to truncate the correction series
_RS_BOUND = np.abs(_RS_RE).sum(axis=1) + np.abs(_RS_IM).sum(axis=1)
_LOG_N = np.log(np.arange(1, 4096, dtype=float))
_RSQRT_N = 1.0 / np.sqrt(np.arange(1, 4096, dtype=float))
_RS_CUTOFF = 1e-18
T_MAX_KERNEL = TWO_PI * 4095.0**2

_CHUNK_CELLS = 1 << 20


@dataclass(frozen=True)
class CriticalSample:
    """One point on the critical line."""

    t: float
    theta: float
    z: float

    @property
    def mod_sq(self) -> float:
        return self.z * self.z


def _theta_series(t):
    """The 1/t tail of the asymptotic expansion of theta(t)."""
    r = 1.0 / np.asarray(t, dtype=float)
    r2 = r * r
    return r * (1 / 48 + r2 * (7 / 5760 + r2 * (31 / 80640 + r2 * (127 / 430080 + r2 * 511 / 1216512))))


def _theta_main(t):
    t = np.asarray(t, dtype=float)
    return 0.5 * t * np.log(t / TWO_PI) - 0.5 * t - math.pi / 8


def _theta_asymptotic(t):
    return _theta_main(t) + _theta_series(t)


def _theta_loggamma(t):
    t = np.asarray(t, dtype=float)
    return loggamma(0.25 + 0.5j * t).imag - 0.5 * t * math.log(math.pi)


def _theta_any(t):
    """theta(t) for any t >= 0, without the public domain check."""
    t = np.asarray(t, dtype=float)
    return np.where(t >= THETA_SWITCH, _theta_asymptotic(np.maximum(t, THETA_SWITCH)), _theta_loggamma(t))


def theta(t):
    """Riemann-Siegel phase theta(t) = arg Gamma(1/4 + it/2) - (t/2) ln pi.

    Uses the asymptotic series (five correction terms) for t >= 10 and the
    complex log-Gamma function below. Scalars in, scalars out.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr >= 1.0)):
        raise DomainError(f"theta(t) requires t >= 1, got {np.min(arr)!r}")
    out = _theta_any(arr)
    return float(out) if out.ndim == 0 else out


def zeta_em(t):
    """zeta(1/2 + it) by Euler-Maclaurin summation (complex array)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if t.size == 0:
        return np.zeros(0, dtype=complex)
    s = 0.5 + 1j * t
    n_terms = int(math.ceil(float(np.max(t)) / 2.0)) + 10
    n = np.arange(1, n_terms, dtype=float)
    # sum_{n < N} n^{-s}
    log_n = np.log(n)
    head = (np.exp(-0.5 * log_n)[None, :] * np.exp(-1j * t[:, None] * log_n[None, :])).sum(axis=1)
    big_n = float(n_terms)
    n_pow = np.exp(-s * math.log(big_n))  # N^{-s}
    total = head + big_n * n_pow / (s - 1.0) + 0.5 * n_pow
    rising = s.copy()
    scale = n_pow / big_n  # N^{-s-1}
    for k in range(1, _EM_TERMS + 1):
        total = total + _EM_COEF[k - 1] * rising * scale
        rising = rising * (s + 2 * k - 1) * (s + 2 * k)
        scale = scale / (big_n * big_n)
    return total


def _z_em(t):
    t = np.asarray(t, dtype=float)
    return (np.exp(1j * _theta_any(t)) * zeta_em(t)).real


@njit(cache=True)
def _rs_kernel(t, out, coef_re, coef_im, bound, cutoff, log_n, rsqrt_n):
    two_pi = 2.0 * math.pi
    n_terms, deg = coef_re.shape
    for i in range(t.size):
        ti = t[i]
        a = math.sqrt(ti / two_pi)
        n_max = int(a)
        r = 1.0 / ti
        r2 = r * r
        tail = r * (1 / 48 + r2 * (7 / 5760 + r2 * (31 / 80640 + r2 * (127 / 430080 + r2 * 511 / 1216512))))
        th = 0.5 * ti * math.log(ti / two_pi) - 0.5 * ti - math.pi / 8 + tail
        main = 0.0
        for n in range(n_max):
            main += math.cos(th - ti * log_n[n]) * rsqrt_n[n]
        p = 1.0 - 2.0 * (a - n_max)
        q = p * p
        inv_a = 1.0 / a
        used = 1
        w = 1.0
        while used < n_terms and bound[used] * w * inv_a > cutoff:
            w *= inv_a
            used += 1
        acc_re = 0.0
        acc_im = 0.0
        for k in range(used - 1, -1, -1):
            g_re = 0.0
            g_im = 0.0
            for j in range(deg - 1, -1, -1):
                g_re = g_re * q + coef_re[k, j]
                g_im = g_im * q + coef_im[k, j]
            if k % 2 == 1:
                g_re *= p
                g_im *= p
            acc_re = acc_re * inv_a + g_re
            acc_im = acc_im * inv_a + g_im
        corr = math.cos(tail) * acc_re - math.sin(tail) * acc_im
        sign = 1.0 if n_max % 2 == 1 else -1.0
        out[i] = 2.0 * main + 2.0 * sign * corr / math.sqrt(a)


def z_riemann_siegel(t):
    """Hardy Z(t) from the Riemann-Siegel formula (valid for t >= 10)."""
    t = np.ascontiguousarray(np.atleast_1d(np.asarray(t, dtype=float)))
    out = np.empty_like(t)
    if t.size == 0:
        return out
    if np.any(~(t >= THETA_SWITCH)):
        raise DomainError("Riemann-Siegel branch needs t >= 10")
    if t.max() > T_MAX_KERNEL:
        raise DomainError(f"Riemann-Siegel kernel tabulated up to t = {T_MAX_KERNEL:g}")
    _rs_kernel(t, out, _RS_RE, _RS_IM, _RS_BOUND, _RS_CUTOFF, _LOG_N, _RSQRT_N)
    return out


def z_euler_maclaurin(t):
    """Hardy Z(t) = exp(i theta) zeta(1/2 + it), summed by Euler-Maclaurin."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(t)
    if t.size == 0:
        return out
    if np.any(t < 0):
        raise DomainError("Z(t) requires t >= 0")
    order = np.argsort(t, kind="stable")
    ts = t[order]
    res = np.empty_like(ts)
    width = int(math.ceil(ts[-1] / 2.0)) + 10
    step = max(1, _CHUNK_CELLS // width)
    for i in range(0, ts.size, step):
        res[i : i + step] = _z_em(ts[i : i + step])
    out[order] = res
    return out


def hardy_z(t):
    """Hardy's Z(t), real on the critical line with |Z(t)| = |zeta(1/2+it)|.

    Accepts a scalar or an array; returns the same shape.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr >= 0.0)):
        raise DomainError(f"hardy_z(t) requires t >= 0, got {np.min(arr)!r}")
    flat = arr.ravel()
    out = np.empty_like(flat)
    low = flat < RS_SWITCH
    if np.any(low):
        out[low] = z_euler_maclaurin(flat[low])
    if np.any(~low):
        out[~low] = z_riemann_siegel(flat[~low])
    out = out.reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def zeta_mod_sq(t):
    """|zeta(1/2 + it)|^2, computed as Z(t)^2."""
    z = hardy_z(t)
    return z * z


def critical_sample(t: float) -> CriticalSample:
    t = float(t)
    return CriticalSample(t=t, theta=float(_theta_any(t)), z=float(hardy_z(t)))
