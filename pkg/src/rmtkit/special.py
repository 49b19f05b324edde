"""Airy and Bessel functions plus the integrals the edge kernels need.

Function values come from scipy.special (AMOS/Cephes). The integrals are
assembled here:

* int_x^inf Ai(t) dt from a tabulated Gauss-Legendre cumulative sum
* int_0^x J_nu(t) dt from the Neumann series 2 sum_k J_{nu+2k+1}(x), nu > -1,
  with J_{-n} = (-1)^n J_n for negative integer orders
"""
from __future__ import annotations

import numpy as np
from scipy import special as sp


def airy_ai(x):
    return sp.airy(x)[0]


def airy_aip(x):
    return sp.airy(x)[1]


_TAIL_STEP = 1.0 / 32.0
_TAIL_TOP = 24.0
_tail_table: dict = {}


def _gl(m: int):
    t, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * (t + 1.0), 0.5 * w


def _airy_integral(a, b, nodes: int = 16) -> np.ndarray:
    """int_a^b Ai(t) dt by Gauss-Legendre (a, b arrays, short intervals)."""
    t, w = _gl(nodes)
    a, b = np.asarray(a, float), np.asarray(b, float)
    pts = a[..., None] + (b - a)[..., None] * t
    return (b - a) * (sp.airy(pts)[0] * w).sum(-1)


def _tail_grid(bottom: float):
    """F(x_k) = int_{x_k}^inf Ai on the grid x_k = bottom + k h up to _TAIL_TOP."""
    key = float(bottom)
    if key not in _tail_table:
        grid = np.arange(bottom, _TAIL_TOP + 0.5 * _TAIL_STEP, _TAIL_STEP)
        cells = _airy_integral(grid[:-1], grid[1:])
        # beyond the top Ai is below 1e-33, so the remaining tail is dropped
        top = _airy_integral(np.array([_TAIL_TOP]), np.array([_TAIL_TOP + 8.0]), 40)[0]
        ai, aip, _, _ = sp.airy(grid)
        _tail_table[key] = (grid, np.concatenate([np.cumsum(cells[::-1])[::-1], [0.0]]) + top, ai, aip)
    return _tail_table[key]


def _taylor_integral(x0, ai, aip, d, terms: int = 14) -> np.ndarray:
    """int_{x0}^{x0+d} Ai from the Taylor series at x0 (Ai'' = t Ai)."""
    derivs = [ai, aip]
    for n in range(terms - 2):
        derivs.append(x0 * derivs[n] + n * derivs[n - 1] if n >= 1 else x0 * derivs[0])
    out = np.zeros_like(d)
    power = d.copy()
    fact = 1.0
    for n, a in enumerate(derivs):
        fact *= n + 1
        out += a * power / fact
        power = power * d
    return out


def airy_ai_tail(x) -> np.ndarray:
    """int_x^inf Ai(t) dt.

    A table of the tail on a grid of step 1/32 is built once by per-cell
    Gauss-Legendre sums; each x is then reached from its nearest grid point
    through the Taylor series of Ai about that point. scipy's itairy is not used
    because it loses up to 1e-3 absolute accuracy for x of order 5 to 10.
    """
    x = np.asarray(x, dtype=float)
    lo = float(np.min(x)) if x.size else 0.0
    bottom = min(-64.0, 64.0 * np.floor(lo / 64.0))
    grid, table, ai, aip = _tail_grid(bottom)
    xc = np.clip(x, bottom, _TAIL_TOP)
    k = np.rint((xc - bottom) / _TAIL_STEP).astype(int)
    out = table[k] - _taylor_integral(grid[k], ai[k], aip[k], xc - grid[k])
    high = x > _TAIL_TOP
    if np.any(high):
        out = np.where(high, _airy_integral(np.where(high, x, 0.0), np.where(high, x, 0.0) + 8.0, 40), out)
    return out


def bessel_j(nu, x):
    return sp.jv(nu, x)


def bessel_jp(nu, x):
    """Derivative of J_nu."""
    return sp.jvp(nu, x)


def _is_negative_integer(nu) -> bool:
    return nu < 0 and float(nu).is_integer()


def bessel_j_integral(nu: float, x) -> np.ndarray:
    """int_0^x J_nu(t) dt for x >= 0 and nu > -1 or nu a negative integer."""
    x = np.asarray(x, dtype=float)
    if _is_negative_integer(nu):
        n = int(-nu)
        return (-1) ** n * bessel_j_integral(float(n), x)
    if nu <= -1:
        raise ValueError("int_0^x J_nu diverges for non-integer nu <= -1")
    xmax = float(np.max(np.abs(x))) if x.size else 0.0
    kmax = int(0.5 * (xmax + 60 + 10 * np.sqrt(xmax))) + 10
    k = np.arange(kmax)
    orders = nu + 2 * k + 1
    terms = sp.jv(orders[:, None], np.ravel(x)[None, :])
    return (2.0 * terms.sum(axis=0)).reshape(x.shape)


def bessel_j_tail(nu: float, x) -> np.ndarray:
    """int_x^inf J_nu(t) dt (conditionally convergent), via int_0^inf J_nu = +/-1."""
    total = 1.0
    if _is_negative_integer(nu):
        total = (-1.0) ** int(-nu)
    return total - bessel_j_integral(nu, x)


def sine_integral(x) -> np.ndarray:
    return sp.sici(x)[0]
