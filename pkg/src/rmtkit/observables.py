"""Estimators of local spectral statistics from unfolded spectra.

Inputs are unfolded spectra (UnfoldedSpectrum, Spectrum or plain arrays of
unit mean spacing). Unless a window is given, estimators use the central
60% of each spectrum by count, which keeps edge effects small.

Form-factor convention: for M levels per spectrum,
S(k) = (1/M) [<|sum_j exp(2 pi i k mu_j)|^2> - |<sum_j exp(2 pi i k mu_j)>|^2],
the variance of the linear statistic, which tends to 1 for k -> inf and to
0 at k = 0 for spectra of fixed size.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import stats
from scipy.spatial import cKDTree

from .spectra import ComplexSpectrum, Curve, Histogram, Spectrum
from .unfolding import UnfoldedSpectrum

BULK_FRACTION = 0.6
SPACING_BIN = 0.1
SPACING_RANGE = (0.0, 4.0)
NUMVAR_CENTERS = 32


class ObservableError(ValueError):
    pass


def _values(s) -> np.ndarray:
    if isinstance(s, (UnfoldedSpectrum, Spectrum)):
        return np.sort(np.asarray(s.values, dtype=float))
    return np.sort(np.asarray(s, dtype=float).ravel())


def _as_list(spectra) -> list:
    if isinstance(spectra, (UnfoldedSpectrum, Spectrum)):
        return [spectra]
    if isinstance(spectra, np.ndarray) and spectra.ndim == 1:
        return [spectra]
    return list(spectra)


def window_values(s, window: Optional[tuple] = None, fraction: float = BULK_FRACTION) -> np.ndarray:
    """Levels inside ``window`` (unfolded units), or the central ``fraction`` by count."""
    v = _values(s)
    if window is not None:
        a, b = window
        return v[(v >= a) & (v <= b)]
    n = v.size
    lo = int(np.floor(0.5 * (1 - fraction) * n))
    hi = int(np.ceil(0.5 * (1 + fraction) * n))
    return v[lo:hi]


# ---------------------------------------------------------------------------
# Nearest-neighbour spacings
# ---------------------------------------------------------------------------

def spacings(spectra, window: Optional[tuple] = None, fraction: float = BULK_FRACTION) -> np.ndarray:
    """Pooled consecutive spacings of levels lying in the window."""
    out = [np.diff(window_values(s, window, fraction)) for s in _as_list(spectra)]
    out = [d for d in out if d.size]
    return np.concatenate(out) if out else np.zeros(0)


def _edges(bins, lo: float, hi: float, width: float) -> np.ndarray:
    if bins is None:
        return np.linspace(lo, hi, int(round((hi - lo) / width)) + 1)
    if np.ndim(bins) == 0:
        return np.linspace(lo, hi, int(bins) + 1)
    return np.asarray(bins, dtype=float)


def histogram(samples, edges, meta: Optional[dict] = None) -> Histogram:
    """Density histogram normalised by the total sample count (mass outside the edges is kept in the count)."""
    samples = np.asarray(samples, dtype=float)
    counts, _ = np.histogram(samples, bins=edges)
    dens = counts / (samples.size * np.diff(edges)) if samples.size else np.zeros(counts.size)
    return Histogram(np.asarray(edges, float), dens, counts.astype(float), dict(meta or {}, count=int(samples.size)))


def spacing_histogram(spectra, window: Optional[tuple] = None, bins=None,
                      fraction: float = BULK_FRACTION) -> Histogram:
    """Histogram of consecutive spacings rescaled to unit pooled mean.

    Default bins: width 0.1 on [0, 4]; ``bins`` may be a count or an edge array.
    """
    s = spacings(spectra, window, fraction)
    if s.size == 0:
        raise ObservableError("no consecutive pair of levels inside the window")
    mean = float(np.mean(s))
    if not mean > 0:
        raise ObservableError("all spacings vanish")
    s = s / mean
    edges = _edges(bins, *SPACING_RANGE, SPACING_BIN)
    return histogram(s, edges, {"name": "spacing_histogram", "raw_mean": mean,
                                "first_moment": float(np.mean(s)), "spacings": int(s.size)})


def normalised_spacings(spectra, window: Optional[tuple] = None, fraction: float = BULK_FRACTION) -> np.ndarray:
    """The spacings behind spacing_histogram (unit mean)."""
    s = spacings(spectra, window, fraction)
    if s.size == 0:
        raise ObservableError("no consecutive pair of levels inside the window")
    return s / np.mean(s)


# ---------------------------------------------------------------------------
# Spacing ratios
# ---------------------------------------------------------------------------

@dataclass
class RatioResult:
    values: np.ndarray
    mean: float
    meta: dict = field(default_factory=dict)


def spacing_ratios(s) -> RatioResult:
    """r_j = min(s_j, s_{j-1}) / max(s_j, s_{j-1}) for consecutive spacings.

    No unfolding is needed. A pair of zero spacings gives r = 0.
    """
    v = _values(s)
    if v.size < 3:
        raise ObservableError("spacing ratios need at least three levels")
    d = np.diff(v)
    lo = np.minimum(d[1:], d[:-1])
    hi = np.maximum(d[1:], d[:-1])
    r = np.divide(lo, hi, out=np.zeros_like(lo), where=hi > 0)
    return RatioResult(r, float(np.mean(r)), {"name": "spacing_ratios", "count": int(r.size)})


def pooled_spacing_ratios(spectra, window: Optional[tuple] = None, fraction: float = 1.0) -> RatioResult:
    """Ratios of every spectrum (restricted to the window) pooled together."""
    parts = [spacing_ratios(window_values(s, window, fraction)).values for s in _as_list(spectra)]
    r = np.concatenate(parts)
    return RatioResult(r, float(np.mean(r)), {"name": "spacing_ratios", "count": int(r.size)})


# ---------------------------------------------------------------------------
# Number variance
# ---------------------------------------------------------------------------

def number_variance(spectra, L_grid, window: Optional[tuple] = None, centers: int = NUMVAR_CENTERS,
                    fraction: float = BULK_FRACTION) -> Curve:
    """Sigma^2(L): variance of the level count in [x0 - L/2, x0 + L/2].

    ``centers`` positions x0 are spread uniformly over the usable range,
    leaving an L/2 margin on each side. With several spectra the variance
    is taken over the ensemble at each position and then averaged over
    positions; with one spectrum it is taken over the positions. L values
    that do not fit in the usable range are dropped and listed in the meta.
    """
    specs = [window_values(s, window, fraction) for s in _as_list(spectra)]
    if not specs or all(v.size == 0 for v in specs):
        raise ObservableError("no levels inside the window")
    lo = max(v[0] for v in specs if v.size)
    hi = min(v[-1] for v in specs if v.size)
    L_grid = np.asarray(L_grid, dtype=float)
    kept, out, dropped = [], [], []
    for L in L_grid:
        if L <= 0 or L >= hi - lo:
            dropped.append(float(L))
            continue
        x0 = np.linspace(lo + 0.5 * L, hi - 0.5 * L, centers)
        counts = np.array([np.searchsorted(v, x0 + 0.5 * L, side="right")
                           - np.searchsorted(v, x0 - 0.5 * L, side="left") for v in specs], dtype=float)
        if len(specs) >= 2:
            var = float(np.mean(np.var(counts, axis=0, ddof=1)))
        else:
            var = float(np.var(counts[0], ddof=1))
        kept.append(L)
        out.append(var)
    meta = {"name": "number_variance", "centers": centers, "spectra": len(specs),
            "range": [float(lo), float(hi)]}
    if dropped:
        meta["truncated"] = dropped
    return Curve(np.array(kept), np.array(out), meta)


# ---------------------------------------------------------------------------
# Spectral form factor
# ---------------------------------------------------------------------------

def form_factor(spectra, k_grid, window: Optional[tuple] = None, fraction: float = BULK_FRACTION) -> Curve:
    """Connected spectral form factor S(k) (see the module docstring)."""
    specs = [window_values(s, window, fraction) for s in _as_list(spectra)]
    specs = [v for v in specs if v.size]
    if not specs:
        raise ObservableError("no levels inside the window")
    k_grid = np.asarray(k_grid, dtype=float)
    m = np.mean([v.size for v in specs])
    sums = np.empty((len(specs), k_grid.size), dtype=complex)
    for i, v in enumerate(specs):
        sums[i] = np.exp(2j * np.pi * np.outer(k_grid, v)).sum(axis=1)
    second = np.mean(np.abs(sums) ** 2, axis=0)
    meta = {"name": "form_factor", "spectra": len(specs), "mean_count": float(m)}
    if len(specs) >= 2:
        first = np.abs(np.mean(sums, axis=0)) ** 2
        meta["connected"] = True
    else:
        first = np.zeros_like(second)
        meta["connected"] = False
        meta["warning"] = "single spectrum: disconnected estimate"
    return Curve(k_grid, np.clip((second - first) / m, 0.0, None), meta)


# ---------------------------------------------------------------------------
# Two-point cluster function
# ---------------------------------------------------------------------------

def cluster_2pt(spectra, lag_grid, width: Optional[float] = None, window: Optional[tuple] = None,
                fraction: float = BULK_FRACTION) -> Curve:
    """Estimate of R_2(0, Delta) - 1 from pair counts at lag Delta.

    Each lag collects ordered pairs with mu_b - mu_a in
    [|Delta| - width/2, |Delta| + width/2] (translation invariance). Reference
    levels are restricted so that the whole lag range stays inside the
    usable range of their spectrum.
    """
    lag_grid = np.asarray(lag_grid, dtype=float)
    if width is None:
        width = float(np.min(np.diff(np.unique(np.abs(lag_grid))))) if lag_grid.size > 1 else 0.1
    specs = [window_values(s, window, fraction) for s in _as_list(spectra)]
    dmax = float(np.max(np.abs(lag_grid))) + 0.5 * width
    pairs = np.zeros(lag_grid.size)
    refs = 0
    for v in specs:
        if v.size < 2:
            continue
        ref = v[(v >= v[0] + dmax) & (v <= v[-1] - dmax)]
        refs += ref.size
        for i, d in enumerate(np.abs(lag_grid)):
            a = max(d - 0.5 * width, 0.0)
            b = d + 0.5 * width
            # count partners on both sides, excluding the level itself
            right = np.searchsorted(v, ref + b, side="right") - np.searchsorted(v, ref + a, side="left")
            left = np.searchsorted(v, ref - a, side="right") - np.searchsorted(v, ref - b, side="left")
            self_hits = 2 * ref.size if a == 0 else 0
            pairs[i] += right.sum() + left.sum() - self_hits
    if refs == 0:
        raise ObservableError("no reference levels far enough from the window edges")
    # both sides were counted, so the interval measure is 2 * (b - a)
    meas = np.array([2 * (d + 0.5 * width - max(d - 0.5 * width, 0.0)) for d in np.abs(lag_grid)])
    r2 = pairs / (refs * meas)
    return Curve(lag_grid, r2 - 1.0, {"name": "cluster_2pt", "width": width, "references": int(refs)})


# ---------------------------------------------------------------------------
# Complex spectra
# ---------------------------------------------------------------------------

def nearest_neighbour_distances(z, window: Optional[tuple] = None) -> np.ndarray:
    """min_{l != j} |z_j - z_l| for the points z_j inside the disc ``window`` = (center, radius).

    Neighbours are searched among all points. Exact k-d tree query.
    """
    v = np.asarray(z.values if isinstance(z, ComplexSpectrum) else z, dtype=complex).ravel()
    if v.size < 2:
        raise ObservableError("nearest-neighbour distances need at least two points")
    pts = np.column_stack([v.real, v.imag])
    tree = cKDTree(pts)
    if window is None:
        sel = np.ones(v.size, dtype=bool)
    else:
        c, r = window
        sel = np.abs(v - complex(c)) <= r
    d, _ = tree.query(pts[sel], k=2)
    return d[:, 1]


def complex_spacings(z, window: Optional[tuple] = None, bins=None, range_: tuple = SPACING_RANGE,
                     width: float = SPACING_BIN) -> Histogram:
    """Histogram of nearest-neighbour distances rescaled to unit mean.

    ``z`` is one ComplexSpectrum or a list of them (distances are pooled,
    each spectrum searched on its own).
    """
    zs = [z] if isinstance(z, ComplexSpectrum) or (isinstance(z, np.ndarray) and z.ndim == 1) else list(z)
    d = np.concatenate([nearest_neighbour_distances(x, window) for x in zs])
    if d.size == 0:
        raise ObservableError("no points inside the window")
    mean = float(np.mean(d))
    s = d / mean
    return histogram(s, _edges(bins, *range_, width), {"name": "complex_spacings", "raw_mean": mean})


def radial_cdf(z, radius: float, grid) -> Curve:
    """Fraction of eigenvalues with |z| <= r * radius, pooled over spectra."""
    zs = [z] if isinstance(z, ComplexSpectrum) or (isinstance(z, np.ndarray) and z.ndim == 1) else list(z)
    a = np.sort(np.concatenate([np.abs(np.asarray(x.values if hasattr(x, "values") else x)) for x in zs]))
    grid = np.asarray(grid, dtype=float)
    frac = np.searchsorted(a, grid * radius, side="right") / a.size
    return Curve(grid, frac, {"name": "radial_cdf", "radius": radius})


# ---------------------------------------------------------------------------
# Comparison helpers
# ---------------------------------------------------------------------------

def bin_average(fn, edges, points: int = 16) -> np.ndarray:
    """Average of a density over each histogram bin (Gauss-Legendre)."""
    edges = np.asarray(edges, dtype=float)
    t, w = np.polynomial.legendre.leggauss(points)
    a, b = edges[:-1, None], edges[1:, None]
    x = 0.5 * (b - a) * t + 0.5 * (a + b)
    vals = np.asarray(fn(x.ravel()), dtype=float).reshape(x.shape)
    return 0.5 * (vals * w).sum(axis=1)


def sup_distance(hist: Histogram, fn, bin_averaged: bool = True) -> float:
    """max over bins of |histogram density - reference density|."""
    ref = bin_average(fn, hist.edges) if bin_averaged else np.asarray(fn(hist.centers), dtype=float)
    return float(np.max(np.abs(hist.density - ref)))


def l2_residual(hist: Histogram, fn, bin_averaged: bool = True) -> float:
    """Sum over bins of width * (histogram density - reference)^2."""
    ref = bin_average(fn, hist.edges) if bin_averaged else np.asarray(fn(hist.centers), dtype=float)
    return float(np.sum(hist.widths * (hist.density - ref) ** 2))


def ks_distance(samples, cdf) -> float:
    """Kolmogorov-Smirnov statistic of a sample against a continuous CDF."""
    return float(stats.kstest(np.asarray(samples, dtype=float), cdf).statistic)


def curve_from_function(fn, x, meta: Optional[dict] = None) -> Curve:
    x = np.asarray(x, dtype=float)
    return Curve(x, np.asarray(fn(x), dtype=float), dict(meta or {}))
