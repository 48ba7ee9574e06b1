#!/usr/bin/env python3
"""Generate ordinates of the nontrivial zeros of zeta(1/2 + it).

The first SMALL zeros come straight from mpmath.zetazero.  Beyond that the
Riemann-Siegel Z function (main sum plus C0..C2 corrections, the correction
polynomials fitted once in high precision by mpmath) is scanned for sign
changes on a fine grid and each root polished by Brent's method.  Indices
are validated against mpmath.zetazero at a handful of checkpoints.

Usage: gen_zeros.py COUNT OUT.txt
"""
import sys

import mpmath
import numpy as np
from numpy.polynomial import chebyshev as cheb
from scipy.optimize import brentq

SMALL = 200
mpmath.mp.dps = 30


def _phi(p):
    return mpmath.cos(2 * mpmath.pi * (p * p - p - mpmath.mpf(1) / 16)) / mpmath.cos(2 * mpmath.pi * p)


def _fit(fn, deg=40):
    nodes = 0.5 * (1 + np.cos(np.pi * (np.arange(deg + 1) + 0.5) / (deg + 1)))
    vals = [float(fn(mpmath.mpf(float(x)))) for x in nodes]
    return cheb.Chebyshev.fit(nodes, vals, deg, domain=[0, 1])


def _corrections():
    pi = mpmath.pi
    c0 = _fit(_phi)
    c1 = _fit(lambda p: -mpmath.diff(_phi, p, 3) / (96 * pi ** 2))
    c2 = _fit(lambda p: mpmath.diff(_phi, p, 6) / (18432 * pi ** 4)
              + mpmath.diff(_phi, p, 2) / (64 * pi ** 2))
    return c0, c1, c2


def _theta(t):
    # Stirling expansion of the Riemann-Siegel theta function.
    return (t / 2 * np.log(t / (2 * np.pi)) - t / 2 - np.pi / 8
            + 1 / (48 * t) + 7 / (5760 * t ** 3) + 31 / (80640 * t ** 5))


def make_z(c0, c1, c2):
    def z(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        tau = np.sqrt(t / (2 * np.pi))
        n_max = np.floor(tau).astype(int)
        p = tau - n_max
        th = _theta(t)
        total = np.zeros_like(t)
        for n in range(1, int(n_max.max()) + 1):
            mask = n <= n_max
            total += np.where(mask, np.cos(th - t * np.log(n)) / np.sqrt(n), 0.0)
        total *= 2
        sign = np.where((n_max - 1) % 2 == 0, 1.0, -1.0)
        inv = 1 / tau
        rem = c0(p) + c1(p) * inv + c2(p) * inv ** 2
        return total + sign * np.sqrt(inv) * rem
    return z


def main():
    count = int(sys.argv[1])
    out = sys.argv[2]
    small = min(SMALL, count)
    zeros = [float(mpmath.zetazero(n).imag) for n in range(1, small + 1)]
    if count > small:
        z = make_z(*_corrections())
        top = float(mpmath.zetazero(count).imag) + 0.5
        start = zeros[-1] + 1e-3
        step = 0.01
        grid = np.arange(start, top, step)
        vals = np.concatenate([z(grid[i:i + 200000]) for i in range(0, len(grid), 200000)])
        idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
        f = lambda t: float(z(t)[0])
        for i in idx:
            zeros.append(brentq(f, grid[i], grid[i + 1], xtol=1e-12))
        zeros = zeros[:count]
        assert len(zeros) == count, len(zeros)
        for n in sorted({small + 1, count // 4, count // 2, count}):
            ref = float(mpmath.zetazero(n).imag)
            err = abs(ref - zeros[n - 1])
            print(f"check n={n}: {zeros[n-1]:.9f} vs {ref:.9f} err={err:.2e}")
            assert err < 1e-6, n
    assert all(a < b for a, b in zip(zeros, zeros[1:]))
    with open(out, "w") as fh:
        for g in zeros:
            fh.write(f"{g:.9f}\n")


if __name__ == "__main__":
    main()
