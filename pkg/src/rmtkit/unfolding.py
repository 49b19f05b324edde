"""Mean level density models and unfolding to unit mean spacing.

A spectrum lambda_1 <= ... <= lambda_N is unfolded with a model density
rho (normalised to one) through mu_j = N * (F(lambda_j) - F(lambda_0)),
where F is the model CDF. Points outside the model support are mapped to
the nearest support edge and flagged.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy.special import ndtr

from .spectra import Curve, Spectrum


class UnfoldingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Density models
# ---------------------------------------------------------------------------

@dataclass
class DensityModel:
    """Normalised mean density with its CDF.

    ``kind`` is one of semicircle, marchenko_pastur, tricomi,
    polynomial_cdf, gaussian_broadened, tabulated. ``params`` holds what
    that kind needs; tabulated kinds keep a (x, cdf) grid in ``_grid``.
    """

    kind: str
    params: dict = field(default_factory=dict)
    _grid: Optional[tuple] = field(default=None, repr=False)

    # --- support ---------------------------------------------------------
    @property
    def support(self) -> tuple[float, float]:
        p = self.params
        if self.kind == "semicircle":
            c = p.get("center", 0.0)
            return c - p["radius"], c + p["radius"]
        if self.kind == "marchenko_pastur":
            c, s2 = p["ratio"], p["scale"]
            return s2 * (1 - np.sqrt(c)) ** 2, s2 * (1 + np.sqrt(c)) ** 2
        if self.kind == "gaussian_broadened":
            return -np.inf, np.inf
        x = self._grid[0]
        return float(x[0]), float(x[-1])

    # --- density and CDF -------------------------------------------------
    def pdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.kind == "semicircle":
            r = p["radius"]
            u = x - p.get("center", 0.0)
            return np.where(np.abs(u) < r, 2.0 / (np.pi * r * r) * np.sqrt(np.clip(r * r - u * u, 0, None)), 0.0)
        if self.kind == "marchenko_pastur":
            c, s2 = p["ratio"], p["scale"]
            a, b = self.support
            with np.errstate(divide="ignore", invalid="ignore"):
                val = np.sqrt(np.clip((b - x) * (x - a), 0, None)) / (2 * np.pi * s2 * c * x)
            return np.where((x > a) & (x < b), val, 0.0)
        if self.kind == "gaussian_broadened":
            centers, h = np.asarray(p["centers"]), p["bandwidth"]
            z = (x[..., None] - centers) / h
            return np.exp(-0.5 * z * z).sum(-1) / (centers.size * h * np.sqrt(2 * np.pi))
        xs, _, dens = self._grid
        return np.interp(x, xs, dens, left=0.0, right=0.0)

    def cdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.kind == "semicircle":
            r = p["radius"]
            u = np.clip((x - p.get("center", 0.0)) / r, -1.0, 1.0)
            return 0.5 + (u * np.sqrt(1 - u * u) + np.arcsin(u)) / np.pi
        if self.kind == "gaussian_broadened":
            centers, h = np.asarray(p["centers"]), p["bandwidth"]
            return ndtr((x[..., None] - centers) / h).mean(-1)
        xs, cdf, _ = self._grid
        return np.interp(x, xs, cdf, left=0.0, right=1.0)

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for k, v in self.params.items():
            if callable(v):
                continue
            out[k] = np.asarray(v).tolist() if isinstance(v, np.ndarray) else v
        return out


def _tabulate_from_density(x: np.ndarray, dens: np.ndarray) -> tuple:
    """Normalised (x, cdf, pdf) table from a non-negative density sample."""
    dens = np.clip(np.asarray(dens, dtype=float), 0.0, None)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(x))])
    total = cum[-1]
    if not total > 0:
        raise UnfoldingError("density integrates to zero")
    return x, cum / total, dens / total


def semicircle(radius: float, center: float = 0.0) -> DensityModel:
    if not radius > 0:
        raise UnfoldingError("semicircle radius must be positive")
    return DensityModel("semicircle", {"radius": float(radius), "center": float(center)})


def marchenko_pastur(ratio: float, scale: float = 1.0, points: int = 4097) -> DensityModel:
    """Limit density of the eigenvalues of W W^dagger / M, W of size N x M, ratio N/M <= 1.

    Entries of W have variance ``scale``. The CDF is tabulated in the angle
    variable x = (a + b)/2 - (b - a)/2 cos(theta), where it is smooth.
    """
    if not 0 < ratio <= 1:
        raise UnfoldingError("Marchenko-Pastur ratio must lie in (0, 1]")
    m = DensityModel("marchenko_pastur", {"ratio": float(ratio), "scale": float(scale)})
    a, b = m.support
    theta = np.linspace(0, np.pi, points)
    x = 0.5 * (a + b) - 0.5 * (b - a) * np.cos(theta)
    # rho(x) dx = rho(x(theta)) x'(theta) dtheta, with a smooth integrand
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = (0.5 * (b - a) * np.sin(theta)) ** 2 / (2 * np.pi * scale * ratio * x)
    integrand = np.nan_to_num(integrand, nan=0.0, posinf=0.0)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (integrand[1:] + integrand[:-1]) * np.diff(theta))])
    cum /= cum[-1]
    m._grid = (x, cum, m.pdf(x))
    return m


def tricomi(vprime: Callable, points: int = 2049, **kw) -> DensityModel:
    """Equilibrium density of a one-cut potential with derivative ``vprime``."""
    from .benchmarks import tricomi_density, tricomi_endpoints

    a, b = tricomi_endpoints(vprime, **kw)
    theta = np.linspace(0, np.pi, points)
    x = 0.5 * (a + b) - 0.5 * (b - a) * np.cos(theta)
    dens = tricomi_density(vprime, x, endpoints=(a, b))
    m = DensityModel("tricomi", {"a": a, "b": b, "vprime": vprime})
    m._grid = _tabulate_from_density(x, dens)
    return m


def tabulated(curve: Curve) -> DensityModel:
    m = DensityModel("tabulated", {})
    order = np.argsort(curve.x)
    m._grid = _tabulate_from_density(curve.x[order], curve.y[order])
    return m


def gaussian_broadened(centers, bandwidth: float) -> DensityModel:
    if not bandwidth > 0:
        raise UnfoldingError("bandwidth must be positive")
    return DensityModel("gaussian_broadened", {"centers": np.sort(np.asarray(centers, float)),
                                               "bandwidth": float(bandwidth)})


def polynomial_cdf(values, degree: int = 7, grid: int = 512) -> DensityModel:
    """Least-squares polynomial fit of the empirical CDF, made monotone.

    The fit is done in Legendre form on the data range mapped to [-1, 1];
    its derivative is evaluated on ``grid`` points, negative parts are
    clipped to zero and the result is re-integrated and renormalised.
    """
    if int(degree) != degree or degree < 1:
        raise UnfoldingError("polynomial degree must be a positive integer")
    x = np.sort(np.asarray(values, dtype=float))
    if x.size < degree + 2:
        raise UnfoldingError("too few levels for the requested polynomial degree")
    lo, hi = x[0], x[-1]
    if hi <= lo:
        raise UnfoldingError("degenerate spectrum")
    t = 2 * (x - lo) / (hi - lo) - 1
    f = (np.arange(1, x.size + 1) - 0.5) / x.size
    coef = npleg.legfit(t, f, degree)
    tg = np.linspace(-1, 1, grid)
    dens = npleg.legval(tg, npleg.legder(coef))
    xg = lo + (tg + 1) * (hi - lo) / 2
    m = DensityModel("polynomial_cdf", {"degree": int(degree), "coef": coef, "range": (float(lo), float(hi))})
    m._grid = _tabulate_from_density(xg, dens)
    return m


# ---------------------------------------------------------------------------
# Fitting and unfolding
# ---------------------------------------------------------------------------

def _pool(spectra) -> np.ndarray:
    if isinstance(spectra, Spectrum):
        return spectra.values
    if isinstance(spectra, np.ndarray):
        return spectra.ravel()
    return np.concatenate([s.values if isinstance(s, Spectrum) else np.asarray(s, float) for s in spectra])


def fit_density(spectra, kind: str = "polynomial_cdf", **params) -> DensityModel:
    """Fit a density model to one spectrum or to the pool of several.

    ``semicircle``: radius = 2 x standard deviation, centre = mean.
    ``polynomial_cdf``: ``degree`` (default 7).
    ``gaussian_broadened``: ``bandwidth`` (default twice the mean spacing).
    ``marchenko_pastur``: ``ratio`` (required); the scale is matched to the mean.
    """
    x = _pool(spectra)
    if x.size < 2:
        raise UnfoldingError("need at least two levels to fit a density")
    if kind == "semicircle":
        return semicircle(2.0 * np.std(x), float(np.mean(x)))
    if kind == "polynomial_cdf":
        return polynomial_cdf(x, params.get("degree", 7), params.get("grid", 512))
    if kind == "gaussian_broadened":
        bw = params.get("bandwidth")
        if bw is None:
            xs = np.sort(x)
            bw = 2.0 * (xs[-1] - xs[0]) / (xs.size - 1)
        return gaussian_broadened(x, bw)
    if kind == "marchenko_pastur":
        ratio = params["ratio"]
        return marchenko_pastur(ratio, float(np.mean(x)))
    raise UnfoldingError(f"unknown density kind {kind!r}")


@dataclass
class UnfoldedSpectrum:
    """Unfolded levels mu_j, the flags of levels outside the model support,
    the model used and the origin lambda0 of the counting."""

    values: np.ndarray
    outside: np.ndarray
    model: DensityModel
    origin: Optional[float] = None
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.values.shape[0]


def unfold(spec, model: DensityModel, lambda0: Optional[float] = None,
           count: Optional[int] = None) -> UnfoldedSpectrum:
    """mu_j = N (F(lambda_j) - F(lambda0)); N defaults to the number of levels.

    ``lambda0`` defaults to the left edge of the model support (or of the
    spectrum for unbounded models).
    """
    vals = spec.values if isinstance(spec, Spectrum) else np.sort(np.asarray(spec, float))
    meta = dict(spec.meta) if isinstance(spec, Spectrum) else {}
    n = len(vals) if count is None else count
    lo, hi = model.support
    outside = (vals < lo) | (vals > hi)
    f0 = 0.0 if lambda0 is None else float(model.cdf(lambda0))
    if lambda0 is None and not np.isfinite(lo):
        f0 = 0.0
    mu = n * (model.cdf(vals) - f0)
    meta["unfolding"] = model.kind
    meta["outside_support"] = int(outside.sum())
    return UnfoldedSpectrum(mu, outside, model, lambda0, meta)


def soft_edge_map(values) -> np.ndarray:
    """mu = sign(x) (2 / (3 pi)) |x|^(3/2) for soft-edge scaled levels x.

    Sends the Airy-regime density to one far from the edge; it inverts
    lambda = sign(mu) (3 pi |mu| / 2)^(2/3).
    """
    from .benchmarks import soft_edge_map_inverse

    return soft_edge_map_inverse(values)


def tricomi_curve(vprime: Callable, grid, **kw) -> Curve:
    """Equilibrium density of a one-cut potential on ``grid``; endpoints in meta."""
    from .benchmarks import tricomi_density, tricomi_endpoints

    a, b = tricomi_endpoints(vprime, **kw)
    x = np.asarray(grid, dtype=float)
    return Curve(x, tricomi_density(vprime, x, endpoints=(a, b)), {"name": "tricomi", "a": a, "b": b})


def mean_level_spacing(spectrum, a: float, b: float) -> float:
    """Mean spacing of consecutive levels that both lie in [a, b].

    Accepts one spectrum or a list; for a list the spacings are pooled.
    """
    specs = spectrum if isinstance(spectrum, (list, tuple)) else [spectrum]
    total, count = 0.0, 0
    for s in specs:
        v = s.values if hasattr(s, "values") else np.asarray(s, float)
        v = np.sort(v[(v >= a) & (v <= b)])
        if v.size >= 2:
            total += v[-1] - v[0]
            count += v.size - 1
    if count == 0:
        raise UnfoldingError("fewer than two levels inside the interval")
    return total / count


def bulk_window(unfolded: UnfoldedSpectrum, fraction: float = 0.6, count: Optional[int] = None) -> tuple[float, float]:
    """Central ``fraction`` of the unfolded range [0, N]."""
    n = len(unfolded) if count is None else count
    return 0.5 * (1 - fraction) * n, 0.5 * (1 + fraction) * n
