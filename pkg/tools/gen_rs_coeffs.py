"""Generate the Riemann-Siegel correction polynomials used by ``ladderlab.zeta``.

The remainder of the Riemann-Siegel sum on the critical line is written as

    R(t) = 2 (-1)^(N-1) a^(-1/2) Re( exp(i dtheta) * sum_k G_k(p) a^(-k) )

with a = sqrt(t / 2pi), N = floor(a), p = 1 - 2 (a - N) and dtheta the
1/t-series part of theta(t).  ``G_k`` is a combination of derivatives of

    F(z) = (exp(pi i (z^2/2 + 3/8)) - i sqrt(2) cos(pi z / 2)) / (2 cos(pi z))

with the coefficients d(k, l) of the Arias de Reyna recurrence at sigma = 1/2.
Each ``G_k`` is written as complex Taylor coefficients in p (ascending).

    python tools/gen_rs_coeffs.py
"""
from __future__ import annotations

from pathlib import Path

import mpmath as mp

mp.mp.dps = 60
TERMS = 14
DEGREE = 120
CUTOFF = 1e-22


def base_function(z):
    num = mp.expjpi(z * z / 2 + mp.mpf(3) / 8) - 1j * mp.sqrt(2) * mp.cos(mp.pi * z / 2)
    return num / (2 * mp.cos(mp.pi * z))


def recurrence(terms):
    d = {(0, 0): mp.mpf(1)}
    get = lambda n, k: d.get((n, k), mp.mpf(0))
    for n in range(1, terms):
        for k in range(0, 3 * n // 2 + 1):
            m = 3 * n - 2 * k
            if m != 0:
                d[(n, k)] = -(m + 1) * get(n - 1, k - 2) + get(n - 1, k) / (4 * m)
            else:
                acc = mp.mpf(0)
                for r in range(k):
                    acc -= (-1) ** (k - r) * get(n, r) * mp.fac(2 * k - 2 * r) / mp.fac(k - r)
                d[(n, k)] = acc
    return get


def main() -> None:
    c = mp.taylor(base_function, 0, DEGREE)
    d = recurrence(TERMS)

    def deriv(m):
        return [c[j + m] * mp.ff(j + m, m) for j in range(len(c) - m)]

    polys = []
    for k in range(TERMS):
        acc = [mp.mpc(0)] * (DEGREE - 3 * k - 1)
        for ell in range(0, 3 * k // 2 + 1):
            series = deriv(3 * k - 2 * ell)
            f = d(k, ell) / (mp.pi ** (2 * k - ell) * (2j) ** ell)
            for j in range(len(acc)):
                acc[j] += f * series[j]
        last = max(j for j, v in enumerate(acc) if abs(v) > CUTOFF)
        polys.append(acc[: last + 1])

    def fmt(x):
        return "0.0" if abs(x) < 1e-60 else mp.nstr(x, 20, min_fixed=0, max_fixed=0)

    lines = [
        '"""Riemann-Siegel correction polynomials G_0..G_{K-1} in p = 1 - 2 frac(a).',
        "",
        "Generated by tools/gen_rs_coeffs.py; do not edit by hand.",
        "Each entry is a tuple of (real, imag) Taylor coefficients, ascending powers.",
        '"""',
        "",
        "RS_POLYS = (",
    ]
    for poly in polys:
        lines.append("    (")
        for v in poly:
            lines.append(f"        ({fmt(v.real)}, {fmt(v.imag)}),")
        lines.append("    ),")
    lines.append(")")
    out = Path(__file__).resolve().parents[1] / "src" / "ladderlab" / "_rs_coeffs.py"
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out} ({TERMS} correction terms)")


if __name__ == "__main__":
    main()
