"""Correlation kernels and k-point correlation functions.

Determinantal processes (beta = 2, Ginibre, finite-N Hermite/Laguerre,
picket fence) give R_k = det[K(x_a, x_b)]. Pfaffian processes (beta = 1, 4)
carry a triple (D, K, J) and give R_k as the Pfaffian of the 2k x 2k
antisymmetric matrix with 2x2 blocks [[D, K], [-K^T, J]] per pair of points.

Sign convention: D(x, y) = d/dy K(x, y) for every Pfaffian kernel (bulk,
hard and soft edge alike). With it D and J are antisymmetric, R_1 = K(x, x)
and the bulk beta = 1 two-point function is
1 - s(r)^2 + s'(r) (int_0^r s - sign(r)/2), s(r) = sin(pi r)/(pi r).
Blocks are interleaved point by point, so the free Pfaffian of the
reference form is +1 for every k.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc, gamma, gammaln, roots_jacobi

from . import special
from .linalg import pfaffian


class KernelError(ValueError):
    pass


ANTISYMMETRY_TOL = 1e-8


# ---------------------------------------------------------------------------
# Bulk (sine) kernels
# ---------------------------------------------------------------------------

def sinc(r):
    """sin(pi r) / (pi r)."""
    return np.sinc(np.asarray(r, dtype=float))


def sinc_prime(r):
    r = np.asarray(r, dtype=float)
    small = np.abs(r) < 1e-3
    rs = np.where(small, 1.0, r)
    val = np.cos(np.pi * rs) / rs - np.sin(np.pi * rs) / (np.pi * rs * rs)
    pr2 = (np.pi * r) ** 2
    series = -np.pi ** 2 * r / 3.0 * (1 - pr2 / 10.0 + pr2 * pr2 / 280.0)
    return np.where(small, series, val)


def sinc_integral(r):
    """int_0^r sin(pi t)/(pi t) dt."""
    return special.sine_integral(np.pi * np.asarray(r, dtype=float)) / np.pi


def _bulk_triple(beta, x, y):
    r = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    if beta == 1:
        return -sinc_prime(r), sinc(r), sinc_integral(r) - 0.5 * np.sign(r)
    # beta = 4: K = s(2r), D = d/dy s(2(x - y)), J = int_0^r s(2E) dE
    return -2.0 * sinc_prime(2 * r), sinc(2 * r), 0.5 * sinc_integral(2 * r)


# ---------------------------------------------------------------------------
# Hard edge (Bessel) kernels
# ---------------------------------------------------------------------------

_GL_CACHE: dict = {}


def _gl01(m: int):
    if m not in _GL_CACHE:
        t, w = np.polynomial.legendre.leggauss(m)
        _GL_CACHE[m] = (0.5 * (t + 1), 0.5 * w)
    return _GL_CACHE[m]


_GJ_CACHE: dict = {}


def _gj01(m: int, b: float):
    """Gauss-Jacobi rule on [0, 1] for the weight t^b."""
    key = (m, b)
    if key not in _GJ_CACHE:
        u, w = roots_jacobi(m, 0.0, b)
        _GJ_CACHE[key] = (0.5 * (u + 1), w / 2.0 ** (b + 1))
    return _GJ_CACHE[key]


def _bessel_gram(nu, x, y, deriv=False):
    """G(x, y) = int_0^1 J_nu(pi x t) J_nu(pi y t) t dt (or its y-derivative) by quadrature.

    The integrand behaves like t^(2 nu + 1) near 0, so the rule carries that
    power as a Jacobi weight and integrates the smooth remainder
    J_nu(z)/z^nu. Negative integer orders reduce to |nu|.
    """
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    if x.size == 0:
        return np.zeros(x.shape)
    if nu < 0 and float(nu).is_integer():
        nu = -nu
    m = int(96 + 2 * np.pi * max(np.max(np.abs(x)), np.max(np.abs(y))))
    t, w = _gj01(m, 2 * nu + 1)
    xt = np.pi * x[..., None] * t
    yt = np.pi * y[..., None] * t
    jx = special.bessel_j(nu, xt) / t ** nu
    if deriv:
        integrand = jx * special.bessel_jp(nu, yt) * np.pi * t ** (1 - nu)
    else:
        integrand = jx * special.bessel_j(nu, yt) / t ** nu
    return (integrand * w).sum(-1)


def hard_edge_k2(alpha, x, y):
    """beta = 2 Bessel kernel K_alpha(x, y) (asymmetric gauge, factor y)."""
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    nu = 0.5 * (alpha - 1)
    out = np.empty(x.shape)
    scale = np.maximum(np.abs(x) + np.abs(y), 1e-300)
    near = np.abs(x - y) < 1e-3 * scale
    far = ~near
    if np.any(far):
        a, b = np.pi * x[far], np.pi * y[far]
        num = x[far] * special.bessel_j(nu + 1, a) * special.bessel_j(nu, b) \
            - y[far] * special.bessel_j(nu, a) * special.bessel_j(nu + 1, b)
        out[far] = np.pi * y[far] * num / (x[far] ** 2 - y[far] ** 2)
    if np.any(near):
        out[near] = np.pi ** 2 * y[near] * _bessel_gram(nu, x[near], y[near])
    return out


def hard_edge_k2_dy(alpha, x, y):
    """d/dy of hard_edge_k2."""
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    nu = 0.5 * (alpha - 1)
    out = np.empty(x.shape)
    scale = np.maximum(np.abs(x) + np.abs(y), 1e-300)
    near = np.abs(x - y) < 2e-2 * scale
    far = ~near
    if np.any(far):
        xf, yf = x[far], y[far]
        a, b = np.pi * xf, np.pi * yf
        ja, ja1 = special.bessel_j(nu, a), special.bessel_j(nu + 1, a)
        jb, jb1 = special.bessel_j(nu, b), special.bessel_j(nu + 1, b)
        num = xf * ja1 * jb - yf * ja * jb1
        dnum = xf * ja1 * np.pi * special.bessel_jp(nu, b) - ja * jb1 \
            - yf * ja * np.pi * special.bessel_jp(nu + 1, b)
        den = xf ** 2 - yf ** 2
        out[far] = np.pi * num / den + np.pi * yf * dnum / den + 2 * np.pi * yf * yf * num / den ** 2
    if np.any(near):
        xn, yn = x[near], y[near]
        out[near] = np.pi ** 2 * _bessel_gram(nu, xn, yn) + np.pi ** 2 * yn * _bessel_gram(nu, xn, yn, deriv=True)
    return out


def hard_edge_density(beta: int, alpha: float, lam):
    """Microscopic level density at the hard edge (diagonal of the kernel)."""
    lam = np.asarray(lam, dtype=float)
    if beta == 2:
        nu = 0.5 * (alpha - 1)
        a = np.pi * lam
        with np.errstate(invalid="ignore", divide="ignore"):
            val = 0.5 * np.pi ** 2 * lam * (special.bessel_j(nu, a) ** 2
                                            - special.bessel_j(nu + 1, a) * special.bessel_j(nu - 1, a))
        # at the origin the density behaves like
        # (pi^2 / 2) lam (pi lam / 2)^(2 nu) / (Gamma(nu + 1) Gamma(nu + 2))
        if alpha > 0 or float(nu).is_integer():
            # a negative integer order is the same kernel as its absolute value
            at0 = 0.0
        elif alpha == 0:
            at0 = np.pi / (gamma(nu + 1) * gamma(nu + 2))
        else:
            at0 = np.inf
        return np.where(lam == 0, at0, val)
    if beta == 1:
        return hard_edge_density(2, 2 * alpha + 1, lam) + 0.5 * np.pi * special.bessel_j(alpha, np.pi * lam) * (
            1 - special.bessel_j_integral(alpha, np.pi * lam))
    if beta == 4:
        mu = 0.5 * (alpha - 3)
        return hard_edge_density(2, alpha - 2, 2 * lam) - 0.5 * np.pi * special.bessel_j(mu, 2 * np.pi * lam) * (
            1 - special.bessel_j_tail(mu, 2 * np.pi * lam))
    raise KernelError("beta must be 1, 2 or 4")


def _hard_k(beta, alpha, x, y):
    if beta == 2:
        return hard_edge_k2(alpha, x, y)
    if beta == 1:
        return hard_edge_k2(2 * alpha + 1, x, y) + 0.5 * np.pi * special.bessel_j(alpha, np.pi * x) * (
            1 - special.bessel_j_integral(alpha, np.pi * y))
    mu = 0.5 * (alpha - 3)
    return hard_edge_k2(alpha - 2, 2 * x, 2 * y) - 0.5 * np.pi * special.bessel_j(mu, 2 * np.pi * x) * (
        1 - special.bessel_j_tail(mu, 2 * np.pi * y))


def _hard_d(beta, alpha, x, y):
    if beta == 1:
        return hard_edge_k2_dy(2 * alpha + 1, x, y) - 0.5 * np.pi ** 2 * special.bessel_j(alpha, np.pi * x) \
            * special.bessel_j(alpha, np.pi * y)
    mu = 0.5 * (alpha - 3)
    return 2.0 * hard_edge_k2_dy(alpha - 2, 2 * x, 2 * y) - np.pi ** 2 * special.bessel_j(mu, 2 * np.pi * x) \
        * special.bessel_j(mu, 2 * np.pi * y)


# ---------------------------------------------------------------------------
# Soft edge (Airy) kernels
# ---------------------------------------------------------------------------

def _airy_gram(x, y, deriv=False):
    """int_0^inf Ai(x+t) Ai(y+t) dt (or Ai'(y+t)) by Gauss-Legendre on [0, T]."""
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    lo = min(np.min(x), np.min(y))
    T = max(0.0, -lo) + 14.0
    m = int(80 + 4 * T)
    t, w = _gl01(m)
    t = T * t
    w = T * w
    ax = special.airy_ai(x[..., None] + t)
    if deriv:
        ay = special.airy_aip(y[..., None] + t)
    else:
        ay = special.airy_ai(y[..., None] + t)
    return (ax * ay * w).sum(-1)


def airy_k2(x, y):
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    out = np.empty(x.shape)
    near = np.abs(x - y) < 1e-3
    far = ~near
    if np.any(far):
        ax, apx, _, _ = _airy4(x[far])
        ay, apy, _, _ = _airy4(y[far])
        out[far] = (ax * apy - apx * ay) / (x[far] - y[far])
    if np.any(near):
        out[near] = _airy_gram(x[near], y[near])
    return out


def _airy4(x):
    from scipy.special import airy
    return airy(x)


def airy_k2_dy(x, y):
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    out = np.empty(x.shape)
    near = np.abs(x - y) < 3e-2
    far = ~near
    if np.any(far):
        xf, yf = x[far], y[far]
        ax, apx, _, _ = _airy4(xf)
        ay, apy, _, _ = _airy4(yf)
        f = ax * apy - apx * ay
        fp = yf * ax * ay - apx * apy
        out[far] = fp / (xf - yf) + f / (xf - yf) ** 2
    if np.any(near):
        out[near] = _airy_gram(x[near], y[near], deriv=True)
    return out


def soft_edge_density(beta: int, lam):
    lam = np.asarray(lam, dtype=float)
    if beta == 2:
        ai, aip = special.airy_ai(lam), special.airy_aip(lam)
        return aip ** 2 - lam * ai ** 2
    if beta == 1:
        return soft_edge_density(2, lam) + 0.5 * special.airy_ai(lam) * (1 - special.airy_ai_tail(lam))
    if beta == 4:
        c = 2.0 ** (2.0 / 3.0)
        return 2.0 ** (-1.0 / 3.0) * soft_edge_density(2, c * lam) \
            - 2.0 ** (-2.0 / 3.0) * special.airy_ai(c * lam) * special.airy_ai_tail(c * lam) / c
    raise KernelError("beta must be 1, 2 or 4")


def _soft_k(beta, x, y):
    if beta == 2:
        return airy_k2(x, y)
    if beta == 1:
        return airy_k2(x, y) + 0.5 * special.airy_ai(x) * (1 - special.airy_ai_tail(y))
    c = 2.0 ** (2.0 / 3.0)
    x, y = np.asarray(x, float), np.asarray(y, float)
    return 2.0 ** (-1.0 / 3.0) * airy_k2(c * x, c * y) \
        - 2.0 ** (-2.0 / 3.0) * special.airy_ai(c * x) * special.airy_ai_tail(c * y) / c


def _soft_d(beta, x, y):
    x, y = np.asarray(x, float), np.asarray(y, float)
    if beta == 1:
        return airy_k2_dy(x, y) + 0.5 * special.airy_ai(x) * special.airy_ai(y)
    c = 2.0 ** (2.0 / 3.0)
    return 2.0 ** (-1.0 / 3.0) * c * airy_k2_dy(c * x, c * y) \
        + 2.0 ** (-2.0 / 3.0) * special.airy_ai(c * x) * special.airy_ai(c * y)


# ---------------------------------------------------------------------------
# J = int_y^x K(s, y) ds (- sign/2 for beta = 1)
# ---------------------------------------------------------------------------

def _j_from_k(kfun, beta, x, y, nodes=48):
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    t, w = _gl01(nodes)
    s = y[..., None] + (x - y)[..., None] * t
    yy = np.broadcast_to(y[..., None], s.shape)
    vals = kfun(s.ravel(), yy.ravel()).reshape(s.shape)
    out = (x - y) * (vals * w).sum(-1)
    if beta == 1:
        out = out - 0.5 * np.sign(x - y)
    return out


# ---------------------------------------------------------------------------
# Finite-N kernels (Christoffel-Darboux with log-scaled recurrences)
# ---------------------------------------------------------------------------

_RESCALE = 1e150


def _orthonormal_pair(family, N, t, nu=0.0):
    """phi_{N-1}(t), phi_N(t) and sum_{k<N} phi_k(t)^2 for the family.

    hermite: weight exp(-t^2) on R, Jacobi a_k = sqrt(k/2), b_k = 0.
    laguerre: weight t^nu exp(-t) on (0, inf), a_k = sqrt(k (k + nu)), b_k = 2k + nu + 1.
    Values are carried as mantissa times exp(logscale) to avoid overflow.
    """
    t = np.asarray(t, dtype=float)
    if family == "hermite":
        def a(k): return np.sqrt(k / 2.0)
        def b(k): return 0.0
        logs = -0.5 * t * t - 0.25 * np.log(np.pi)
    else:
        def a(k): return np.sqrt(k * (k + nu))
        def b(k): return 2.0 * k + nu + 1.0
        with np.errstate(divide="ignore"):
            logs = 0.5 * nu * np.log(t) - 0.5 * t - 0.5 * gammaln(nu + 1.0)
    prev = np.zeros_like(t)
    cur = np.ones_like(t)
    acc = np.zeros_like(t)  # sum of squares of mantissas, same scale squared
    for k in range(N):
        acc += cur * cur
        nxt = ((t - b(k)) * cur - (a(k) * prev if k > 0 else 0.0)) / a(k + 1)
        prev, cur = cur, nxt
        big = np.abs(cur) > _RESCALE
        if np.any(big):
            prev = np.where(big, prev / _RESCALE, prev)
            cur = np.where(big, cur / _RESCALE, cur)
            acc = np.where(big, acc / _RESCALE ** 2, acc)
            logs = np.where(big, logs + np.log(_RESCALE), logs)
    with np.errstate(over="ignore", invalid="ignore"):
        scale = np.exp(logs)
        return prev * scale, cur * scale, acc * scale * scale, a(N)


def _finite_n_k(family, N, nu, sigma, x, y):
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    if family == "hermite":
        c = 1.0 / (np.sqrt(2.0) * sigma)
    else:
        c = 1.0 / sigma
    s, t = c * x, c * y
    pm_s, p_s, diag_s, aN = _orthonormal_pair(family, N, s, nu)
    pm_t, p_t, _, _ = _orthonormal_pair(family, N, t, nu)
    with np.errstate(divide="ignore", invalid="ignore"):
        cd = aN * (p_s * pm_t - pm_s * p_t) / (s - t)
    near = np.abs(s - t) < 1e-7 * np.maximum(1.0, np.abs(s))
    if np.any(near):
        # direct sum for near-coincident points (both evaluated at the midpoint)
        mid = 0.5 * (s[near] + t[near])
        _, _, dsum, _ = _orthonormal_pair(family, N, mid, nu)
        cd = np.where(near, 0.0, cd)
        cd[near] = dsum
    return np.nan_to_num(cd) * c


# ---------------------------------------------------------------------------
# Kernel descriptor
# ---------------------------------------------------------------------------

@dataclass
class Kernel:
    """A correlation kernel with the data needed to evaluate it.

    ``kind`` is bulk, hard, soft, finite_n, picket_fence or ginue; ``beta``
    selects the determinantal (2) or Pfaffian (1, 4) structure.
    """

    kind: str
    beta: int = 2
    params: dict = field(default_factory=dict)

    @property
    def is_pfaffian(self) -> bool:
        return self.beta in (1, 4) and self.kind in ("bulk", "hard", "soft")

    @property
    def is_complex(self) -> bool:
        return self.kind == "ginue"

    def k(self, x, y):
        """Scalar kernel K(x, y) (broadcasting)."""
        p = self.params
        if self.kind == "bulk":
            r = np.asarray(x, float) - np.asarray(y, float)
            return sinc(2 * r) if self.beta == 4 else sinc(r)
        if self.kind == "hard":
            return _hard_k(self.beta, p["alpha"], x, y)
        if self.kind == "soft":
            return _soft_k(self.beta, x, y)
        if self.kind == "finite_n":
            return _finite_n_k(p["family"], p["N"], p.get("nu", 0.0), p.get("sigma", 1.0), x, y)
        if self.kind == "picket_fence":
            x, y = np.asarray(x, float), np.asarray(y, float)
            on_site = (np.abs(y - np.round(y)) < 1e-12) & (np.round(y) >= 1) & (np.round(y) <= p["N"])
            return np.where(on_site, sinc(y - x), 0.0)
        if self.kind == "ginue":
            a, b = np.asarray(x, complex), np.asarray(y, complex)
            base = np.exp(-np.abs(a) ** 2 + a * np.conj(b))
            if p.get("region", "bulk") == "bulk":
                return base
            ph = np.exp(1j * p.get("phi0", 0.0))
            return 0.5 * base * erfc((a / ph + ph * np.conj(b)) / np.sqrt(2.0))
        raise KernelError(f"unknown kernel kind {self.kind!r}")

    def triple(self, x, y, sign_term: bool = True):
        """(D, K, J) for Pfaffian kernels.

        With ``sign_term=False`` the -sign(x - y)/2 part of J (beta = 1) is
        left out, so that a caller can discretise it separately.
        """
        if not self.is_pfaffian:
            raise KernelError("kernel is determinantal; use k()")
        if self.kind == "bulk":
            D, K, J = _bulk_triple(self.beta, x, y)
        elif self.kind == "hard":
            a = self.params["alpha"]
            kf = lambda u, v: _hard_k(self.beta, a, u, v)
            D, K, J = _hard_d(self.beta, a, x, y), kf(x, y), _j_from_k(kf, self.beta, x, y)
        else:
            kf = lambda u, v: _soft_k(self.beta, u, v)
            D, K, J = _soft_d(self.beta, x, y), kf(x, y), _j_from_k(kf, self.beta, x, y)
        if self.beta == 1 and not sign_term:
            J = J + 0.5 * np.sign(np.asarray(x, float) - np.asarray(y, float))
        return D, K, J

    def density(self, x):
        """One-point function R_1(x) = K(x, x)."""
        if self.kind == "hard":
            return hard_edge_density(self.beta, self.params["alpha"], x)
        if self.kind == "soft":
            return soft_edge_density(self.beta, x)
        if self.kind == "ginue":
            return np.real(self.k(x, x))
        return self.k(x, x)

    def describe(self) -> dict:
        return {"kind": self.kind, "beta": self.beta, **self.params}


def bulk_kernel(beta: int = 2) -> Kernel:
    if beta not in (1, 2, 4):
        raise KernelError("beta must be 1, 2 or 4")
    return Kernel("bulk", beta)


def hard_edge_kernel(beta: int, alpha: float) -> Kernel:
    if beta not in (1, 2, 4):
        raise KernelError("beta must be 1, 2 or 4")
    lo = {2: -1.0, 1: 0.0, 4: 1.0}[beta]
    if alpha < lo:
        raise KernelError(f"alpha={alpha} below the admissible range for beta={beta}")
    return Kernel("hard", beta, {"alpha": float(alpha)})


def soft_edge_kernel(beta: int = 2) -> Kernel:
    if beta not in (1, 2, 4):
        raise KernelError("beta must be 1, 2 or 4")
    return Kernel("soft", beta)


def finite_n_kernel(family: str, N: int, nu: float = 0.0, sigma: float = 1.0) -> Kernel:
    """Christoffel-Darboux kernel of the N x N Gaussian (hermite) or Laguerre ensemble.

    hermite: GUE with weight exp(-x^2/(2 sigma^2)); laguerre: weight x^nu exp(-x/sigma).
    The diagonal is the one-point function R_1 (integrates to N).
    """
    if family not in ("hermite", "laguerre"):
        raise KernelError("family must be 'hermite' or 'laguerre'")
    if N < 1:
        raise KernelError("N must be positive")
    if family == "laguerre" and nu <= -1:
        raise KernelError("Laguerre parameter must exceed -1")
    return Kernel("finite_n", 2, {"family": family, "N": int(N), "nu": float(nu), "sigma": float(sigma)})


def picket_fence_kernel(N: int) -> Kernel:
    return Kernel("picket_fence", 2, {"N": int(N)})


def ginue_kernel(region: str = "bulk", phi0: float = 0.0) -> Kernel:
    if region not in ("bulk", "edge"):
        raise KernelError("region must be 'bulk' or 'edge'")
    return Kernel("ginue", 2, {"region": region, "phi0": float(phi0)})


# ---------------------------------------------------------------------------
# k-point functions
# ---------------------------------------------------------------------------

def pfaffian_block_matrix(kernel: Kernel, pts, weights=None, sign_block=None) -> np.ndarray:
    """Interleaved 2k x 2k antisymmetric matrix of the triple at ``pts``.

    Entry pairs (2a, 2a+1) belong to point a. With ``weights`` the block of
    (a, b) is scaled by sqrt(w_a w_b), as used by the Nystrom discretisation.
    ``sign_block`` (already weighted) replaces the -sign/2 part of J.
    """
    pts = np.asarray(pts, dtype=float)
    k = pts.size
    X, Y = np.meshgrid(pts, pts, indexing="ij")
    D, K, J = kernel.triple(X, Y, sign_term=sign_block is None)
    if weights is not None:
        sw = np.sqrt(np.asarray(weights, float))
        S = np.outer(sw, sw)
        D, K, J = D * S, K * S, J * S
    if sign_block is not None:
        J = J + sign_block
    M = np.empty((2 * k, 2 * k))
    M[0::2, 0::2] = D
    M[0::2, 1::2] = K
    M[1::2, 0::2] = -K.T
    M[1::2, 1::2] = J
    asym = np.max(np.abs(M + M.T)) if M.size else 0.0
    if not asym <= ANTISYMMETRY_TOL * max(1.0, np.max(np.abs(M))):
        raise KernelError(f"discretised Pfaffian block violates antisymmetry by {asym:.3g}")
    # remove the remaining rounding asymmetry
    return 0.5 * (M - M.T)


def pf_kpoint(kernel: Kernel, points) -> float:
    """R_k for a Pfaffian kernel: Pf of the 2k x 2k block matrix."""
    if not kernel.is_pfaffian:
        raise KernelError("pf_kpoint needs a (D, K, J) kernel; use det_kpoint")
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    return float(np.real(pfaffian(pfaffian_block_matrix(kernel, pts))))


def det_kpoint(kernel: Kernel, points) -> float:
    """R_k for a determinantal kernel: det[K(x_a, x_b)]."""
    if kernel.is_pfaffian:
        raise KernelError("det_kpoint needs a scalar kernel; use pf_kpoint")
    pts = np.atleast_1d(np.asarray(points))
    X, Y = np.meshgrid(pts, pts, indexing="ij")
    return float(np.real(np.linalg.det(kernel.k(X, Y))))


def correlation(kernel: Kernel, points) -> float:
    """k-point correlation function R_k at the given points."""
    if kernel.is_pfaffian:
        return pf_kpoint(kernel, points)
    return det_kpoint(kernel, points)


def picket_fence_correlation(points, N: int) -> float:
    """R_k of the equidistant spectrum {1, ..., N} (counting measure on the sites)."""
    return det_kpoint(picket_fence_kernel(N), np.asarray(points, dtype=float))


def ginue_correlation(points, region: str = "bulk", phi0: float = 0.0) -> float:
    """R_k of the complex Ginibre ensemble at the bulk or at the edge point exp(i phi0)."""
    return det_kpoint(ginue_kernel(region, phi0), np.asarray(points, dtype=complex))
