"""Closed-form and quadrature benchmark curves.

Wigner surmise, Poisson and Ginibre nearest-neighbour laws, windowed
Poisson mixtures, number-variance and form-factor asymptotics, the
equilibrium (Tricomi) density of a one-cut potential and the map between
the soft-edge and bulk scales.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy import integrate, optimize
from scipy.special import gammaincc, gammaln

EULER_GAMMA = 0.57721566490153286061
# published first-moment scale of the complex Ginibre spacing law;
# ginue_s_hat() re-derives it
GINUE_SHAT = 1.143


class BenchmarkError(ValueError):
    pass


def _check_beta(beta, allowed=(1, 2, 4)):
    if beta not in allowed:
        raise BenchmarkError(f"beta must be one of {allowed}, got {beta!r}")


# ---------------------------------------------------------------------------
# Nearest-neighbour spacing laws
# ---------------------------------------------------------------------------

def _log_surmise_constants(beta: float) -> tuple[float, float]:
    g1 = gammaln((beta + 2) / 2)
    g2 = gammaln((beta + 1) / 2)
    return float(np.log(2.0) + (beta + 1) * g1 - (beta + 2) * g2), float(np.exp(2 * (g1 - g2)))


def surmise_constants(beta: float) -> tuple[float, float]:
    """(a, b) with p(s) = a s^beta exp(-b s^2) normalised to unit mean."""
    log_a, b = _log_surmise_constants(beta)
    return float(np.exp(log_a)), b


def wigner_surmise(beta: float, s) -> np.ndarray:
    """Two-level spacing law for the Dyson index beta (any beta > 0).

    Evaluated in logarithms, so large beta (where a and s^beta overflow
    separately) stays finite.
    """
    if not beta > 0:
        raise BenchmarkError("beta must be positive")
    s = np.asarray(s, dtype=float)
    log_a, b = _log_surmise_constants(beta)
    sp = np.clip(s, 0, None)
    with np.errstate(divide="ignore"):
        logp = log_a + beta * np.log(sp) - b * sp * sp
    return np.where(s > 0, np.exp(logp), 0.0)


def wigner_surmise_cdf(beta: float, s) -> np.ndarray:
    """CDF of the surmise: regularised lower incomplete gamma in b s^2."""
    from scipy.special import gammainc
    s = np.clip(np.asarray(s, dtype=float), 0, None)
    _, b = surmise_constants(beta)
    return gammainc((beta + 1) / 2, b * s * s)


def poisson_spacing(dim: int, s) -> np.ndarray:
    """Nearest-neighbour law of uncorrelated levels on a line (dim=1) or in the plane (dim=2)."""
    if dim == 2:
        return poisson_2d_spacing(s)
    if dim != 1:
        raise BenchmarkError("dim must be 1 or 2")
    s = np.asarray(s, dtype=float)
    return np.where(s >= 0, np.exp(-np.clip(s, 0, None)), 0.0)


def poisson_spacing_cdf(s) -> np.ndarray:
    s = np.clip(np.asarray(s, dtype=float), 0, None)
    return -np.expm1(-s)


def poisson_2d_spacing(s) -> np.ndarray:
    """Nearest-neighbour law of a uniform Poisson process in the plane, unit mean."""
    s = np.asarray(s, dtype=float)
    return np.where(s >= 0, 0.5 * np.pi * s * np.exp(-0.25 * np.pi * s * s), 0.0)


@dataclass(frozen=True)
class AtomDescriptor:
    """A point mass at ``location`` (the picket-fence spacing law)."""

    location: float = 1.0

    def cdf(self, s) -> np.ndarray:
        return np.where(np.asarray(s, dtype=float) >= self.location, 1.0, 0.0)

    def moment(self, k: int) -> float:
        return self.location ** k

    def bin_mass(self, edges) -> np.ndarray:
        """Mass per histogram bin [e_i, e_{i+1})."""
        edges = np.asarray(edges, dtype=float)
        return ((edges[:-1] <= self.location) & (self.location < edges[1:])).astype(float)


def picket_fence_descriptor() -> AtomDescriptor:
    """Spacing law of an equidistant spectrum: all mass at s = 1."""
    return AtomDescriptor(1.0)


POISSON_RATIO_MEAN = 2.0 * np.log(2.0) - 1.0


def poisson_ratio_density(r) -> np.ndarray:
    """Density of min(s1, s2)/max(s1, s2) for independent exponential gaps."""
    r = np.asarray(r, dtype=float)
    return np.where((r >= 0) & (r <= 1), 2.0 / (1.0 + r) ** 2, 0.0)


# --- complex Ginibre -------------------------------------------------------

def _ginue_unit(x, tol: float = 1e-15, jmax: int = 4000) -> np.ndarray:
    """Nearest-neighbour law in the scaled variable x (before the 1/s_hat fix).

    q(x) = prod_{j>=1} Q(1+j, x^2) * sum_{l>=1} 2 x^{2l+1} e^{-x^2} / Gamma(1+l, x^2),
    with Q the regularised upper incomplete Gamma function.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    for i, xi in enumerate(x):
        if xi <= 0:
            continue
        t = xi * xi
        # both the product and the sum converge once j, l exceed t by a margin
        jstop = int(min(jmax, t + 40 + 12 * np.sqrt(t + 1)))
        j = np.arange(1, jstop + 1)
        q = gammaincc(1.0 + j, t)
        logprod = np.sum(np.log(q))
        # term_l = 2 x^{2l+1} e^{-t} / (l! Q(l+1, t)), done in logs
        l = j
        logterm = np.log(2.0) + (2 * l + 1) * np.log(xi) - t - gammaln(1.0 + l) - np.log(q)
        out[i] = np.exp(logprod) * np.sum(np.exp(logterm))
        if not np.isfinite(out[i]):
            out[i] = 0.0
    return out


@lru_cache(maxsize=1)
def ginue_s_hat() -> float:
    """Scale making the Ginibre spacing law have unit mean (about 1.143)."""
    # q(x) is already normalised; s_hat is its first moment
    val, _ = integrate.quad(lambda x: x * _ginue_unit(x)[0], 0, 12, limit=200, epsabs=1e-12)
    return float(val)


def ginue_spacing(s, s_hat: Optional[float] = None) -> np.ndarray:
    """Nearest-neighbour spacing density of the complex Ginibre bulk."""
    sh = ginue_s_hat() if s_hat is None else s_hat
    s = np.asarray(s, dtype=float)
    return sh * _ginue_unit(sh * s).reshape(s.shape)


# --- windowed Poisson ------------------------------------------------------

def windowed_poisson(s, omega: Callable, a: float, b: float, Omega: Optional[Callable] = None) -> np.ndarray:
    """Spacing law of independent levels with mean density omega on [a, b].

    p(s) = (b-a)/[Omega(b)-Omega(a)]^2 * int_a^b omega^2 exp(-(b-a) omega s / (Omega(b)-Omega(a))) dmu
    """
    if not b > a:
        raise BenchmarkError("need b > a")
    if Omega is None:
        tot, _ = integrate.quad(omega, a, b, limit=200)
    else:
        tot = Omega(b) - Omega(a)
    if not tot > 0:
        raise BenchmarkError("window carries no mean density (Omega(b) = Omega(a))")
    s = np.atleast_1d(np.asarray(s, dtype=float))
    nodes, weights = np.polynomial.legendre.leggauss(200)
    mu = 0.5 * (b - a) * nodes + 0.5 * (a + b)
    w = 0.5 * (b - a) * weights
    om = np.asarray(omega(mu), dtype=float)
    expo = np.exp(-np.outer(np.clip(s, 0, None), (b - a) * om / tot))
    out = (b - a) / tot ** 2 * (expo * (w * om * om)).sum(axis=1)
    return np.where(s >= 0, out, 0.0)


# ---------------------------------------------------------------------------
# Number variance and form factor
# ---------------------------------------------------------------------------

def numvar_asymptotic(beta: int, L) -> np.ndarray:
    """Large-L number variance of the Gaussian ensembles (unit density)."""
    _check_beta(beta)
    L = np.asarray(L, dtype=float)
    g = EULER_GAMMA
    if beta == 1:
        return 2 / np.pi ** 2 * (np.log(2 * np.pi * L) + g + 1 - np.pi ** 2 / 8)
    if beta == 2:
        return 1 / np.pi ** 2 * (np.log(2 * np.pi * L) + g + 1)
    return 1 / (2 * np.pi ** 2) * (np.log(4 * np.pi * L) + g + 1 + np.pi ** 2 / 8)


def numvar_poisson(L) -> np.ndarray:
    return np.asarray(L, dtype=float)


def sff_closed(beta: int, k) -> np.ndarray:
    """Spectral form factor of the unfolded bulk (unit density)."""
    _check_beta(beta)
    k = np.abs(np.asarray(k, dtype=float))
    if beta == 2:
        return np.minimum(k, 1.0)
    if beta == 1:
        small = k * (2 - np.log(2 * k + 1))
        with np.errstate(divide="ignore", invalid="ignore"):
            large = 2 - k * np.log((2 * k + 1) / (2 * k - 1))
        return np.where(k <= 1, small, large)
    with np.errstate(divide="ignore"):
        small = k / 4 * (2 - np.log(np.abs(k - 1)))
    small = np.where(k == 1, np.inf, small)
    return np.where(k <= 2, small, 1.0)


def sff_poisson(k) -> np.ndarray:
    return np.ones_like(np.asarray(k, dtype=float))


# ---------------------------------------------------------------------------
# Equilibrium density of a one-cut potential
# ---------------------------------------------------------------------------

def _theta_rule(m: int) -> np.ndarray:
    return (np.arange(m) + 0.5) * np.pi / m


def tricomi_endpoints(vprime: Callable, guess: tuple = (-1.0, 1.0), nodes: int = 256,
                      tol: float = 1e-13) -> tuple[float, float]:
    """Support [a, b] from the two endpoint conditions.

    With mu = c + r cos(theta) the measure dmu / sqrt((b-mu)(mu-a)) is
    dtheta, and the conditions read
    int_0^pi V'(mu) dtheta = 0 and (1/pi) int_0^pi V'(mu) mu dtheta = 1.
    """
    th = _theta_rule(nodes)
    ct = np.cos(th)
    w = np.pi / nodes

    def resid(p):
        c, r = p[0], abs(p[1])
        mu = c + r * ct
        v = np.asarray(vprime(mu), dtype=float)
        return [w * v.sum(), w * (v * mu).sum() / np.pi - 1.0]

    c0 = 0.5 * (guess[0] + guess[1])
    r0 = 0.5 * (guess[1] - guess[0])
    sol = optimize.root(resid, [c0, r0], method="hybr", tol=tol)
    if not sol.success or not np.all(np.abs(resid(sol.x)) < 1e-9):
        raise BenchmarkError(f"endpoint conditions not solved: {sol.message}")
    c, r = sol.x[0], abs(sol.x[1])
    return float(c - r), float(c + r)


def tricomi_density(vprime: Callable, lam, endpoints: Optional[tuple] = None,
                    vsecond: Optional[Callable] = None, nodes: int = 256) -> np.ndarray:
    """Mean density rho(lambda) on its one-cut support (zero outside)."""
    a, b = tricomi_endpoints(vprime) if endpoints is None else endpoints
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    th = _theta_rule(nodes)
    mu = 0.5 * (a + b) + 0.5 * (b - a) * np.cos(th)
    vmu = np.asarray(vprime(mu), dtype=float)
    out = np.zeros_like(lam)
    inside = (lam > a) & (lam < b)
    for i in np.nonzero(inside)[0]:
        x = lam[i]
        d = mu - x
        vx = float(vprime(np.array([x]))[0])
        with np.errstate(divide="ignore", invalid="ignore"):
            q = (vmu - vx) / d
        close = np.abs(d) < 1e-7 * max(1.0, abs(x))
        if np.any(close):
            if vsecond is not None:
                q[close] = vsecond(mu[close])
            else:
                h = 1e-5 * max(1.0, abs(x))
                q[close] = (np.asarray(vprime(mu[close] + h)) - np.asarray(vprime(mu[close] - h))) / (2 * h)
        out[i] = np.sqrt((b - x) * (x - a)) * q.sum() * (np.pi / nodes) / np.pi ** 2
    return out


# ---------------------------------------------------------------------------
# Soft edge <-> bulk scale
# ---------------------------------------------------------------------------

def soft_edge_map(mu) -> np.ndarray:
    """lambda = sign(mu) (3 pi |mu| / 2)^(2/3): unfolded variable to the Airy scale."""
    mu = np.asarray(mu, dtype=float)
    return np.sign(mu) * (1.5 * np.pi * np.abs(mu)) ** (2.0 / 3.0)


def soft_edge_map_inverse(lam) -> np.ndarray:
    """mu = sign(lambda) (2/(3 pi)) |lambda|^(3/2)."""
    lam = np.asarray(lam, dtype=float)
    return np.sign(lam) * (2.0 / (3.0 * np.pi)) * np.abs(lam) ** 1.5


def soft_edge_map_jacobian(mu) -> np.ndarray:
    """d lambda / d mu = (3/2)^(-1/3) pi^(2/3) |mu|^(-1/3)."""
    mu = np.asarray(mu, dtype=float)
    return (1.5) ** (-1.0 / 3.0) * np.pi ** (2.0 / 3.0) * np.abs(mu) ** (-1.0 / 3.0)


def soft_edge_density_in_bulk_units(mu, beta: int = 2) -> np.ndarray:
    """Soft-edge level density transported to the unfolded variable mu.

    Deep in the bulk (mu -> -infinity) this tends to one.
    """
    from .kernels import soft_edge_density
    mu = np.asarray(mu, dtype=float)
    return soft_edge_density(beta, soft_edge_map(mu)) * soft_edge_map_jacobian(mu)
