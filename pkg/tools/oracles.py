"""Arbitrary-precision reference values for the test suite.

Writes tests/data/oracles.json.  ``--with-integrals`` also recomputes the
|zeta|^2 integrals (several minutes); otherwise the frozen ones are kept.
"""
import argparse
import json
from pathlib import Path

import mpmath as mp
import numpy as np

OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "oracles.json"
SEED = 20240611


def s_of_t(t):
    t = mp.mpf(t)
    return mp.nzeros(t) - mp.siegeltheta(t) / mp.pi - 1


def s1_of_t(t):
    """(1/pi) int_{1/2}^inf ln|zeta(s+it)| - ln|zeta(s)| ds."""
    cuts = [mp.mpf(1) / 2, 1, 2, 4, 8, 16, 32, 64, 128]
    f = lambda s: mp.log(abs(mp.zeta(s + 1j * mp.mpf(t))))
    g = lambda s: mp.log(abs(mp.zeta(s)))
    return (mp.quad(f, cuts) - mp.quad(g, cuts)) / mp.pi


def mod_sq(t):
    return abs(mp.zeta(mp.mpf(1) / 2 + 1j * t)) ** 2


def unit_integral(a, b, pieces_per_unit=4):
    n = int(round((b - a) * pieces_per_unit))
    h = mp.mpf(b - a) / n
    return mp.fsum(mp.quad(mod_sq, [a + k * h, a + (k + 1) * h]) for k in range(n))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--with-integrals", action="store_true")
    args = ap.parse_args()
    mp.mp.dps = 30
    old = json.loads(OUT.read_text()) if OUT.exists() else {}

    rng = np.random.default_rng(SEED)
    ts = np.sort(10.0 ** rng.uniform(1.0, 5.0, 100))
    data = {
        "seed": SEED,
        "z_points": [float(t) for t in ts],
        "z_values": [float(mp.siegelz(mp.mpf(float(t)))) for t in ts],
        "theta": {repr(t): float(mp.siegeltheta(t)) for t in (1.5, 3.0, 2 * np.pi, 9.5, 10.0, 17.25, 100.0, 1000.0, 1.0e5, 123456.0)},
        "z_small": {repr(t): float(mp.siegelz(t)) for t in (0.5, 2.0, 7.5, 9.99, 10.01, 12.0)},
        "first_zero": float(mp.zetazero(1).imag),
        "s_values": {repr(t): float(s_of_t(t)) for t in (10.0, 14.2, 50.5, 1000.3, 7005.08, 10000.5)},
        "n_values": {repr(t): int(mp.nzeros(t)) for t in (100.0, 1000.0, 10000.0)},
        "s1_values": {repr(t): float(s1_of_t(t)) for t in (5.0, 10.0, 20.0, 100.5)},
        "one_minus_c_pow_1_30": float((1 - mp.euler) ** (mp.mpf(1) / 30)),
        "log_one_minus_c": float(mp.log(1 - mp.euler)),
    }
    if args.with_integrals:
        data["J_100"] = float(unit_integral(0, 100, 2))
        data["I_1000_1010"] = float(unit_integral(1000, 1010))
        data["I_20000_20005"] = float(unit_integral(20000, 20005))
    else:
        for key in ("J_100", "I_1000_1010", "I_20000_20005"):
            data[key] = old[key]
    # phi_1(100) for T0 = 100: g(y) = y ln y + (c - ln 2 pi) y = J(100)
    beta = mp.euler - mp.log(2 * mp.pi)
    J = mp.mpf(data["J_100"])
    data["phi1_100"] = float(mp.findroot(lambda y: y * mp.log(y) + beta * y - J, 80))
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(data, indent=1) + "\n")


if __name__ == "__main__":
    main()
