"""Normalised joint eigenvalue densities of the Gaussian ensembles.

All densities are returned as logarithms, with -inf where the density
vanishes (coinciding levels, zero levels with alpha > 0). Normalisation
constants are sums of log-Gamma values, so they stay finite for large N.

Conventions (weights as in :mod:`rmtkit.ensembles`):

* Dyson classes, beta in {1, 2, 4}: density on R^N of the (unordered)
  distinct eigenvalues, |Delta(E)|^beta prod exp(-a E_j^2) with
  a = 1/(2 sigma^2) for beta = 1, 2 and a = 1/sigma^2 for beta = 4 (each
  Kramers pair counted once).
* The seven other classes: density on (0, inf)^N of the positive levels,
  |Delta(E^2)|^beta prod |E_j|^alpha exp(-c E_j^2) with c = 1/sigma^2 for
  beta = 1, 2 and c = 2/sigma^2 for beta = 4.
* Complex Ginibre: density on C^N (Lebesgue measure d Re z d Im z),
  |Delta(z)|^2 prod exp(-|z_j|^2 / (2 sigma^2)).
* Quaternion Ginibre: density of the upper-half-plane representatives,
  prod_{a<b} |z_a - z_b|^2 |z_a - conj z_b|^2 prod |z_j - conj z_j|^2
  exp(-|z_j|^2 / sigma^2).
"""
from __future__ import annotations

from typing import Optional

import numpy as np
from scipy.special import gammaln

from .spectra import ComplexSpectrum, Spectrum


class JpdfError(ValueError):
    pass


def _values(e, dtype=float) -> np.ndarray:
    if isinstance(e, (Spectrum, ComplexSpectrum)):
        return np.asarray(e.values, dtype=dtype)
    return np.atleast_1d(np.asarray(e, dtype=dtype))


def vandermonde(e) -> float | complex:
    """prod_{a<b} (E_b - E_a); 1 for fewer than two entries."""
    v = np.asarray(e.values if hasattr(e, "values") else e)
    out = 1.0 + 0j if np.iscomplexobj(v) else 1.0
    for b in range(1, v.size):
        out *= np.prod(v[b] - v[:b])
    return out


def log_abs_vandermonde(e) -> float:
    """sum_{a<b} log |E_b - E_a| (-inf on coincidence)."""
    v = np.asarray(e)
    if v.size < 2:
        return 0.0
    iu = np.triu_indices(v.size, 1)
    d = np.abs(v[iu[1]] - v[iu[0]])
    with np.errstate(divide="ignore"):
        return float(np.sum(np.log(d)))


def _check_beta(beta):
    if beta not in (1, 2, 4):
        raise JpdfError(f"beta must be 1, 2 or 4, got {beta!r}")


def _default_sigma(beta: int, sigma: Optional[float]) -> float:
    if sigma is None:
        return float(np.sqrt(2.0)) if beta == 4 else 1.0
    if not sigma > 0:
        raise JpdfError("sigma must be positive")
    return float(sigma)


def log_norm_dyson(n: int, beta: int, sigma: Optional[float] = None) -> float:
    """-log int_{R^n} |Delta|^beta prod exp(-a x^2) dx (Mehta's integral)."""
    _check_beta(beta)
    s = _default_sigma(beta, sigma)
    a = 1.0 / (2 * s * s) if beta in (1, 2) else 1.0 / (s * s)
    j = np.arange(1, n + 1)
    log_z = (-(0.5 * n + 0.25 * beta * n * (n - 1)) * np.log(2 * a) + 0.5 * n * np.log(2 * np.pi)
             + np.sum(gammaln(1 + 0.5 * beta * j)) - n * gammaln(1 + 0.5 * beta))
    return float(-log_z)


def log_jpdf_dyson(e, beta: int, sigma: Optional[float] = None) -> float:
    """log of the normalised joint density of a Gaussian (Dyson) ensemble."""
    _check_beta(beta)
    x = _values(e)
    if not np.all(np.isfinite(x)):
        raise JpdfError("eigenvalues must be finite")
    s = _default_sigma(beta, sigma)
    a = 1.0 / (2 * s * s) if beta in (1, 2) else 1.0 / (s * s)
    lv = log_abs_vandermonde(x)
    if lv == -np.inf:
        return -np.inf
    return log_norm_dyson(x.size, beta, s) + beta * lv - a * float(np.sum(x * x))


def log_norm_az(n: int, alpha: float, beta: int, sigma: Optional[float] = None) -> float:
    """-log of int_{(0,inf)^n} |Delta(E^2)|^beta prod E^alpha exp(-c E^2) dE.

    From the Laguerre-Selberg integral after the substitution t = c E^2.
    """
    _check_beta(beta)
    if alpha < 0:
        raise JpdfError("alpha must be non-negative")
    s = _default_sigma(beta, sigma)
    c = 1.0 / (s * s) if beta in (1, 2) else 2.0 / (s * s)
    j = np.arange(n)
    log_p = (np.sum(gammaln(1 + 0.5 * beta) - gammaln(1 + 0.5 * beta * (j + 1))
                    - gammaln(0.5 * (alpha + 1 + beta * j)))
             + n * np.log(2.0) + (0.5 * n * (alpha + 1) + 0.5 * beta * n * (n - 1)) * np.log(c))
    return float(log_p)


def log_jpdf_az(e, alpha: float, beta: int, sigma: Optional[float] = None) -> float:
    """log of the normalised joint density of the positive levels of the
    chiral and Bogoliubov-de Gennes classes (repulsion alpha from the origin)."""
    _check_beta(beta)
    if alpha < 0:
        raise JpdfError("alpha must be non-negative")
    x = _values(e)
    if not np.all(np.isfinite(x)):
        raise JpdfError("eigenvalues must be finite")
    s = _default_sigma(beta, sigma)
    c = 1.0 / (s * s) if beta in (1, 2) else 2.0 / (s * s)
    lv = log_abs_vandermonde(x * x)
    if lv == -np.inf:
        return -np.inf
    ax = np.abs(x)
    if alpha > 0:
        if np.any(ax == 0):
            return -np.inf
        log_rep = alpha * float(np.sum(np.log(ax)))
    else:
        log_rep = 0.0
    return log_norm_az(x.size, alpha, beta, s) + beta * lv + log_rep - c * float(np.sum(x * x))


def log_norm_ginibre(n: int, kind: str, sigma: Optional[float] = None) -> float:
    if kind == "complex":
        s = _default_sigma(2, sigma)
        j = np.arange(1, n + 1)
        log_z = gammaln(n + 1) + np.sum(np.log(np.pi) + j * np.log(2 * s * s) + gammaln(j))
        return float(-log_z)
    if kind == "quaternion":
        s = _default_sigma(4, sigma)
        k = np.arange(1, n + 1)
        # over C^n the integral is s^{2n(n+1)} n! prod 2 pi (2k-1)!; half of it per
        # level lies in the upper half-plane
        log_z = (2 * n * (n + 1) * np.log(s) + gammaln(n + 1)
                 + np.sum(np.log(2 * np.pi) + gammaln(2 * k)) - n * np.log(2.0))
        return float(-log_z)
    if kind == "real":
        raise JpdfError("no closed-form joint density is provided for the real Ginibre ensemble")
    raise JpdfError(f"unknown Ginibre kind {kind!r}")


def log_jpdf_ginibre(z, kind: str = "complex", sigma: Optional[float] = None) -> float:
    """log of the normalised joint density of complex (kind='complex') or
    quaternion (kind='quaternion') Ginibre eigenvalues."""
    v = _values(z, complex)
    if not np.all(np.isfinite(v)):
        raise JpdfError("eigenvalues must be finite")
    norm = log_norm_ginibre(v.size, kind, sigma)
    if kind == "complex":
        s = _default_sigma(2, sigma)
        lv = log_abs_vandermonde(v)
        if lv == -np.inf:
            return -np.inf
        return norm + 2 * lv - float(np.sum(np.abs(v) ** 2)) / (2 * s * s)
    s = _default_sigma(4, sigma)
    im = np.abs(2 * v.imag)
    if np.any(im == 0):
        return -np.inf
    # |z_a - z_b|^2 |z_a - conj z_b|^2 over a < b: the Vandermonde of the 2n
    # points {z, conj z} divided by the self-pair factors |z_j - conj z_j|
    both = np.concatenate([v, np.conj(v)])
    lv = log_abs_vandermonde(both)
    if lv == -np.inf:
        return -np.inf
    log_self = float(np.sum(np.log(im)))
    log_pairs = lv - log_self            # = sum_{a<b} log(|z_a - z_b|^2 |z_a - conj z_b|^2)
    return norm + log_pairs + 2 * log_self - float(np.sum(np.abs(v) ** 2)) / (s * s)
