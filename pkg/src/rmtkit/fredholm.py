"""Fredholm determinants and Pfaffians by Nystrom discretisation.

Gap probabilities E(0; I) of determinantal processes are det(1 - K|_I);
for Pfaffian processes they are Pf(J_2 - K|_I) with the interleaved
matrix kernel of :mod:`rmtkit.kernels`. Both are discretised on
Gauss-Legendre nodes with the symmetric weighting sqrt(w_i) K_ij sqrt(w_j),
which converges exponentially for analytic kernels on bounded intervals.

For beta = 1 the discontinuous -sign(x - y)/2 part of J is discretised
by exact integration of the node interpolant, which restores exponential
convergence. Spacing densities follow from p(s) = d^2/ds^2 E(0; [-s/2, s/2])
by central differences with one Richardson step; extreme-value laws from
P(no level in [lambda, inf)) or P(no level in [0, lambda]).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .kernels import Kernel, bulk_kernel, pfaffian_block_matrix
from .linalg import slogpf
from .spectra import Curve

MAX_SPACING_STEP = 0.05


class FredholmError(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __iter__(self):
        # allows ``x, w = gauss_legendre(...)``
        return iter((self.nodes, self.weights))


def gauss_legendre(order: int, a: float, b: float) -> QuadratureRule:
    """The order-point Gauss-Legendre rule mapped to [a, b]."""
    if order < 2:
        raise FredholmError("quadrature order must be at least 2")
    t, w = np.polynomial.legendre.leggauss(order)
    return QuadratureRule(0.5 * (b - a) * t + 0.5 * (a + b), 0.5 * (b - a) * w, order)


def _nodes(intervals, order: int):
    """Concatenated quadrature for one interval or a union of disjoint intervals."""
    ivs = np.atleast_2d(np.asarray(intervals, dtype=float))
    if ivs.shape[1] != 2:
        raise FredholmError("intervals must be given as (a, b) pairs")
    xs, ws = [], []
    for a, b in ivs:
        if not np.isfinite(a) or not np.isfinite(b):
            raise FredholmError("intervals must be finite; truncate semi-infinite ones")
        if b < a:
            raise FredholmError("interval with b < a")
        if b == a:
            continue
        x, w = gauss_legendre(order, a, b)
        xs.append(x)
        ws.append(w)
    if not xs:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(xs), np.concatenate(ws)


@lru_cache(maxsize=16)
def _legendre_integration(order: int) -> np.ndarray:
    """A with sum_j A_ij f(t_j) = int_{-1}^{t_i} p(t) dt for the interpolant p of f.

    Uses the discrete orthogonality of Legendre polynomials at the
    Gauss-Legendre nodes, so no Vandermonde inverse is needed.
    """
    t, w = np.polynomial.legendre.leggauss(order)
    V = np.polynomial.legendre.legvander(t, order - 1)        # V[j, k] = P_k(t_j)
    coef_map = (V * w[:, None]).T * ((2 * np.arange(order) + 1) / 2.0)[:, None]  # c = coef_map @ f
    # antiderivatives of P_k from -1, evaluated at the nodes
    anti = np.empty((order, order))
    for k in range(order):
        e = np.zeros(order)
        e[k] = 1.0
        anti[:, k] = np.polynomial.legendre.legval(t, np.polynomial.legendre.legint(e, lbnd=-1))
    out = anti @ coef_map
    out.flags.writeable = False
    return out


def _sign_block(x, w, order: int) -> np.ndarray:
    """Weighted discretisation of -sign(x - y)/2 for the Nystrom Pfaffian.

    Within one quadrature panel the operator f -> int sign(x - y) f(y) dy is
    applied exactly to the polynomial interpolant (matrix 2A - w); across
    panels sign is constant and the plain rule is exact. The result is
    scaled to sqrt(w_i) E_ij sqrt(w_j) form and is antisymmetric.
    """
    m = x.size
    panels = m // order
    A = _legendre_integration(order)
    eps = np.sign(x[:, None] - x[None, :]) * w[None, :]
    for p in range(panels):
        sl = slice(p * order, (p + 1) * order)
        half = 0.5 * w[sl].sum()          # panel half-length (weights sum to 2 on [-1, 1])
        eps[sl, sl] = 2.0 * half * A - w[None, sl]
    sw = np.sqrt(w)
    block = -0.5 * eps * sw[:, None] / sw[None, :]
    return 0.5 * (block - block.T)


def fredholm_det(kernel: Kernel, intervals, order: int = 64) -> float:
    """det(1 - K) on the interval(s) for a determinantal kernel."""
    x, w = _nodes(intervals, order)
    if x.size == 0:
        return 1.0
    sw = np.sqrt(w)
    X, Y = np.meshgrid(x, x, indexing="ij")
    kv = kernel.k(X, Y)
    if not np.all(np.isfinite(kv)):
        raise FredholmError("kernel is not finite on the quadrature nodes")
    A = np.eye(x.size) - sw[:, None] * kv * sw[None, :]
    sign, logdet = np.linalg.slogdet(A)
    return float(np.real(sign) * np.exp(logdet))


def fredholm_pfaffian(kernel: Kernel, intervals, order: int = 64) -> float:
    """Pf(J_2 - K) on the interval(s) for a Pfaffian (beta = 1, 4) kernel."""
    if not kernel.is_pfaffian:
        raise FredholmError("kernel has no Pfaffian structure")
    x, w = _nodes(intervals, order)
    if x.size == 0:
        return 1.0
    m = x.size
    ref = np.zeros((2 * m, 2 * m))
    idx = np.arange(m)
    ref[2 * idx, 2 * idx + 1] = 1.0
    ref[2 * idx + 1, 2 * idx] = -1.0
    sign_block = _sign_block(x, w, order) if kernel.beta == 1 else None
    blocks = pfaffian_block_matrix(kernel, x, w, sign_block)
    if not np.all(np.isfinite(blocks)):
        raise FredholmError("kernel is not finite on the quadrature nodes")
    A = ref - blocks
    sign, logabs = slogpf(A)
    return float(np.real(sign) * np.exp(logabs))


def gap_probability(kernel: Kernel, intervals, order: int = 64) -> float:
    """Probability that no level falls in the interval(s)."""
    if kernel.is_pfaffian:
        return fredholm_pfaffian(kernel, intervals, order)
    return fredholm_det(kernel, intervals, order)


def _check_grid(s_grid: np.ndarray) -> None:
    if s_grid.ndim != 1 or s_grid.size == 0:
        raise FredholmError("s grid must be a non-empty 1D array")
    if np.any(s_grid < 0):
        raise FredholmError("spacings must be non-negative")
    if s_grid.size > 1:
        d = np.diff(s_grid)
        if np.any(d <= 0):
            raise FredholmError("s grid must be strictly increasing")
        if np.max(d) > MAX_SPACING_STEP + 1e-12:
            raise FredholmError(f"s grid step {np.max(d):.3g} is coarser than {MAX_SPACING_STEP}")
        if np.max(d) - np.min(d) > 1e-9 * max(1.0, np.max(d)):
            raise FredholmError("s grid must be uniform")


def spacing_exact(beta: int, s_grid, order: int = 64, h: float = 1e-3) -> Curve:
    """Nearest-neighbour spacing density of the bulk (unit mean spacing).

    p(s) = E''(s) with E(s) the gap probability of [-s/2, s/2]; the second
    derivative uses central differences at h and 2h combined by one
    Richardson step (error O(h^4)).
    """
    kern = bulk_kernel(beta)
    s_grid = np.asarray(s_grid, dtype=float)
    _check_grid(s_grid)

    def E(s):
        if s <= 0:
            return 1.0
        return gap_probability(kern, [(-0.5 * s, 0.5 * s)], order)

    out = np.empty_like(s_grid)
    for i, s in enumerate(s_grid):
        if s >= 2 * h:
            e0 = E(s)
            d1 = (E(s + h) - 2 * e0 + E(s - h)) / h ** 2
            d2 = (E(s + 2 * h) - 2 * e0 + E(s - 2 * h)) / (4 * h ** 2)
            out[i] = (4 * d1 - d2) / 3
        else:
            # E has a one-sided expansion at 0, so use a fourth-order
            # forward stencil for the second derivative
            vals = np.array([E(s + k * h) for k in range(5)])
            out[i] = float(np.array([35, -104, 114, -56, 11]) @ vals) / (12 * h ** 2)
    # differencing noise can leave values of order 1e-10 below zero
    out = np.clip(out, 0.0, None)
    return Curve(s_grid, out, {"name": "spacing_exact", "beta": beta, "order": order, "h": h})


def _tail_length(kernel: Kernel, x: float) -> float:
    """Length L with the kernel diagonal below 1e-16 beyond x + L (soft edge)."""
    # Ai'(t)^2 - t Ai(t)^2 ~ exp(-4 t^{3/2} / 3) / (8 pi t); below 1e-16 for t >= 7.5
    return max(10.0, 8.0 - x)


def extreme_cdf(kernel: Kernel, lam, side: str = "max", order: int = 64,
                cutoff: Optional[float] = None) -> Curve:
    """CDF of the largest (side='max') or smallest (side='min') level.

    max: F(lambda) = E(0; [lambda, lambda + L]) where L is chosen so the
    kernel diagonal beyond the cut is below 1e-16.
    min: F(lambda) = 1 - E(0; [edge, lambda]) with edge 0 for hard edges.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    out = np.empty_like(lam)
    for i, x in enumerate(lam):
        if side == "max":
            top = cutoff if cutoff is not None else x + _tail_length(kernel, x)
            out[i] = gap_probability(kernel, [(x, max(top, x))], order)
        elif side == "min":
            lo = 0.0 if kernel.kind == "hard" else (cutoff if cutoff is not None else min(x - 10.0, -16.0))
            out[i] = 1.0 - gap_probability(kernel, [(lo, max(x, lo))], order)
        else:
            raise FredholmError("side must be 'max' or 'min'")
    out = np.clip(out, 0.0, 1.0)
    return Curve(lam, out, {"name": "extreme_cdf", "side": side, **kernel.describe()})


def extreme_pdf(kernel: Kernel, lam, side: str = "max", order: int = 64, h: float = 1e-4) -> Curve:
    """Density of the extreme level: derivative of extreme_cdf (central difference)."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    fp = extreme_cdf(kernel, lam + h, side, order).y
    fm = extreme_cdf(kernel, lam - h, side, order).y
    return Curve(lam, (fp - fm) / (2 * h), {"name": "extreme_pdf", "side": side, **kernel.describe()})
