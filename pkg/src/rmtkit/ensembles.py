"""Gaussian random-matrix ensembles for the ten symmetry classes and Ginibre.

Every matrix is drawn from the weight exp(-tr H^2 / (2 sigma^2)) (Hermitian
classes) or exp(-tr X X^dagger / (2 sigma^2)) (Ginibre), with the block
structure of its class. Default widths are sigma = 1 for beta in {1, 2} and
sigma = sqrt(2) for beta = 4.

Randomness is counter based: draw ``d`` of a run with seed ``s`` uses the
Philox stream with key ``s + 2**64 * d``, so any draw can be regenerated on
its own and the result never depends on how draws are spread over threads.
Gaussian variates come from the Box-Muller transform of that stream.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg
from .spectra import ComplexSpectrum, Spectrum

HERMITIAN_CLASSES = ("A", "AI", "AII", "BD", "C", "AIII", "BDI", "CII", "CI", "DIII")
GINIBRE_CLASSES = ("GinOE", "GinUE", "GinSE")
ALL_CLASSES = HERMITIAN_CLASSES + GINIBRE_CLASSES
CHIRAL_CLASSES = ("AIII", "BDI", "CII", "CI", "DIII")

_BETA = {"A": 2, "AI": 1, "AII": 4, "BD": 2, "C": 2, "AIII": 2, "BDI": 1,
         "CII": 4, "CI": 1, "DIII": 4, "GinOE": 1, "GinUE": 2, "GinSE": 4}

# classes with a parameter nu, and the allowed range
_NU_RANGE = {"BD": (0, 1), "DIII": (0, 1), "AIII": (0, None), "BDI": (0, None), "CII": (0, None)}


class EnsembleError(ValueError):
    pass


def class_alpha(cls: str, nu: int = 0) -> Optional[int]:
    """Exponent alpha of |E_j| in the joint density (None for Dyson/Ginibre)."""
    table = {"BD": 2 * nu, "C": 2, "AIII": 2 * nu + 1, "BDI": nu,
             "CII": 4 * nu + 3, "CI": 1, "DIII": 4 * nu + 1}
    return table.get(cls)


def class_zero_modes(cls: str, nu: int = 0) -> int:
    table = {"BD": nu, "AIII": nu, "BDI": nu, "CII": 2 * nu, "DIII": 2 * nu}
    return table.get(cls, 0)


@dataclass(frozen=True)
class EnsembleSpec:
    """Symmetry class, size parameter and Gaussian width of an ensemble."""

    cls: str
    n: int
    nu: int = 0
    sigma: Optional[float] = None

    def __post_init__(self):
        if self.cls not in ALL_CLASSES:
            raise EnsembleError(f"unknown symmetry class {self.cls!r}")
        if int(self.n) != self.n or self.n < 1:
            raise EnsembleError("n must be a positive integer")
        lo_hi = _NU_RANGE.get(self.cls)
        if lo_hi is None:
            if self.nu != 0:
                raise EnsembleError(f"class {self.cls} takes no nu parameter")
        else:
            lo, hi = lo_hi
            if self.nu < lo or (hi is not None and self.nu > hi):
                raise EnsembleError(f"nu={self.nu} outside the range allowed for class {self.cls}")
        if self.sigma is not None and not self.sigma > 0:
            raise EnsembleError("sigma must be positive")

    @property
    def cartan(self) -> str:
        return self.cls

    @property
    def beta(self) -> int:
        return _BETA[self.cls]

    @property
    def width(self) -> float:
        if self.sigma is not None:
            return float(self.sigma)
        return float(np.sqrt(2.0)) if self.beta == 4 else 1.0

    @property
    def alpha(self) -> Optional[int]:
        return class_alpha(self.cls, self.nu)

    @property
    def zero_modes(self) -> int:
        return class_zero_modes(self.cls, self.nu)

    @property
    def dim(self) -> int:
        """Linear size of the sampled matrix."""
        n, nu = self.n, self.nu
        return {"A": n, "AI": n, "AII": 2 * n, "BD": 2 * n + nu, "C": 2 * n,
                "AIII": 2 * n + nu, "BDI": 2 * n + nu, "CII": 4 * n + 2 * nu,
                "CI": 2 * n, "DIII": 2 * (2 * n + nu),
                "GinOE": n, "GinUE": n, "GinSE": 2 * n}[self.cls]

    @property
    def is_chiral(self) -> bool:
        return self.cls in CHIRAL_CLASSES

    @property
    def is_ginibre(self) -> bool:
        return self.cls in GINIBRE_CLASSES


# ---------------------------------------------------------------------------
# Random numbers
# ---------------------------------------------------------------------------

def make_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator for draw ``stream`` of a run seeded with ``seed``."""
    if seed < 0 or stream < 0:
        raise EnsembleError("seed and stream must be non-negative")
    key = (int(seed) % 2**64) + (int(stream) % 2**64) * 2**64
    return np.random.Generator(np.random.Philox(key=key))


def normals(gen: np.random.Generator, shape) -> np.ndarray:
    """Standard normal variates by Box-Muller on the uniform stream."""
    size = int(np.prod(shape))
    half = (size + 1) // 2
    u1 = 1.0 - gen.random(half)  # in (0, 1]
    u2 = gen.random(half)
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])
    return z[:size].reshape(shape)


def _cnormals(gen, shape):
    """Complex variates with independent N(0, 1) real and imaginary parts."""
    z = normals(gen, (2,) + tuple(shape))
    return z[0] + 1j * z[1]


# ---------------------------------------------------------------------------
# Matrix construction
# ---------------------------------------------------------------------------

def _herm(g):
    return 0.5 * (g + g.conj().T)


def _quaternion(a, b):
    """Complex 2x2-block image [[A, B], [-conj B, conj A]] of a quaternion matrix."""
    return np.block([[a, b], [-b.conj(), a.conj()]])


def _chiral_block(spec: EnsembleSpec, gen) -> np.ndarray:
    """Off-diagonal block W of a chiral Hamiltonian [[0, W], [W^dagger, 0]]."""
    n, nu, s = spec.n, spec.nu, spec.width
    cls = spec.cls
    if cls == "AIII":
        return s / np.sqrt(2.0) * _cnormals(gen, (n, n + nu))
    if cls == "BDI":
        return s / np.sqrt(2.0) * normals(gen, (n, n + nu))
    if cls == "CII":
        a = 0.5 * s * _cnormals(gen, (n, n + nu))
        b = 0.5 * s * _cnormals(gen, (n, n + nu))
        return _quaternion(a, b)
    if cls == "CI":
        g = _cnormals(gen, (n, n))
        return s / np.sqrt(2.0) * 0.5 * (g + g.T)
    if cls == "DIII":
        m = 2 * n + nu
        g = _cnormals(gen, (m, m))
        return s / np.sqrt(2.0) * 0.5 * (g - g.T)
    raise EnsembleError(f"class {cls} is not chiral")


def _draw(spec: EnsembleSpec, gen):
    """Either ('dense', H) or ('chiral', W) or ('ginibre', X)."""
    n, nu, s = spec.n, spec.nu, spec.width
    cls = spec.cls
    if spec.is_chiral:
        return "chiral", _chiral_block(spec, gen)
    if cls == "A":
        return "dense", s * _herm(_cnormals(gen, (n, n)))
    if cls == "AI":
        return "dense", s * _herm(normals(gen, (n, n)))
    if cls == "AII":
        a = s / np.sqrt(2.0) * _herm(_cnormals(gen, (n, n)))
        g = _cnormals(gen, (n, n))
        b = s / np.sqrt(2.0) * 0.5 * (g - g.T)
        return "dense", _quaternion(a, b)
    if cls == "BD":
        m = 2 * n + nu
        g = normals(gen, (m, m))
        return "dense", 1j * s * 0.5 * (g - g.T)
    if cls == "C":
        a = s / np.sqrt(2.0) * _herm(_cnormals(gen, (n, n)))
        g = _cnormals(gen, (n, n))
        b = s / np.sqrt(2.0) * 0.5 * (g + g.T)
        return "dense", np.block([[a, b], [b.conj(), -a.conj()]])
    if cls == "GinOE":
        return "ginibre", s * normals(gen, (n, n))
    if cls == "GinUE":
        return "ginibre", s * _cnormals(gen, (n, n))
    if cls == "GinSE":
        a = s / np.sqrt(2.0) * _cnormals(gen, (n, n))
        b = s / np.sqrt(2.0) * _cnormals(gen, (n, n))
        return "ginibre", _quaternion(a, b)
    raise EnsembleError(f"unknown class {cls}")


@dataclass(frozen=True)
class MatrixSample:
    """A dense matrix together with the symmetry class it was drawn from."""

    entries: np.ndarray
    cartan: str


def sample_matrix(spec: EnsembleSpec, seed: int, stream: int = 0) -> MatrixSample:
    """One matrix of the ensemble (chiral classes return the full block form)."""
    kind, m = _draw(spec, make_generator(seed, stream))
    if kind == "chiral":
        p, q = m.shape
        h = np.zeros((p + q, p + q), dtype=m.dtype)
        h[:p, p:] = m
        h[p:, :p] = m.conj().T
        m = h
    return MatrixSample(m, spec.cls)


def parse_matrix(text: str) -> np.ndarray:
    """Square matrix from CSV rows; complex entries use Python syntax (``1+2j``)."""
    rows = []
    for i, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([complex(tok.strip().replace(" ", "")) for tok in line.split(",")])
        except ValueError:
            raise EnsembleError(f"line {i}: cannot parse matrix row {line!r}") from None
    if len({len(r) for r in rows}) > 1:
        raise EnsembleError("matrix rows differ in length")
    a = np.array(rows, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise EnsembleError("matrix text is not square")
    if not np.any(a.imag):
        a = a.real.copy()
    return a


def _spectrum_of(kind: str, m: np.ndarray, meta: dict):
    if kind == "dense":
        return Spectrum(linalg.eigvalsh(m), meta=meta)
    if kind == "chiral":
        return Spectrum(linalg.eigvals_chiral(m), meta=meta)
    return ComplexSpectrum(linalg.eigvals(m), meta=meta)


def sample_spectrum(spec: EnsembleSpec, seed: int, stream: int = 0, matrix: Optional[np.ndarray] = None):
    """Eigenvalues of one draw: Spectrum, or ComplexSpectrum for Ginibre.

    ``matrix`` overrides the random draw (a test hook): it is diagonalised
    as a Hermitian matrix for Hermitian classes and as a general one for
    Ginibre classes.
    """
    meta = {"class": spec.cls, "n": spec.n, "nu": spec.nu, "sigma": spec.width,
            "seed": seed, "stream": stream}
    if matrix is not None:
        m = np.asarray(matrix)
        kind = "ginibre" if spec.is_ginibre else "dense"
        meta["override"] = True
    else:
        kind, m = _draw(spec, make_generator(seed, stream))
    try:
        return _spectrum_of(kind, m, meta)
    except linalg.ConvergenceError as exc:
        raise linalg.ConvergenceError(f"{exc} (class {spec.cls}, seed {seed}, stream {stream})") from None


def default_threads() -> int:
    return max(1, os.cpu_count() or 1)


def sample_spectra(spec: EnsembleSpec, seed: int, draws: int, threads: int = 1, start: int = 0) -> list:
    """Spectra of draws ``start .. start + draws - 1``; result is thread-count independent."""
    streams = range(start, start + draws)
    if threads <= 1 or draws < 2:
        return [sample_spectrum(spec, seed, d) for d in streams]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda d: sample_spectrum(spec, seed, d), streams))


# ---------------------------------------------------------------------------
# Post-processing and scales
# ---------------------------------------------------------------------------

def kramers_reduce(spec: Spectrum, rel_tol: float = 1e-8) -> Spectrum:
    """Collapse doubly degenerate (Kramers) pairs to single levels."""
    v = np.sort(spec.values)
    if v.size % 2:
        raise EnsembleError("odd number of levels cannot be Kramers paired")
    a, b = v[0::2], v[1::2]
    scale = max(np.max(np.abs(v)), 1e-300) if v.size else 1.0
    bad = np.flatnonzero(np.abs(a - b) > rel_tol * scale)
    if bad.size:
        j = bad[0]
        raise EnsembleError(f"spectrum is not Kramers degenerate: levels {a[j]!r} and {b[j]!r} "
                            f"differ by {b[j] - a[j]:.3g} (tolerance {rel_tol * scale:.3g})")
    return Spectrum(0.5 * (a + b), meta=dict(spec.meta, kramers_reduced=True))


ZERO_MODE_RTOL = 1e-10


def count_zero_modes(spec: Spectrum, sigma: float, rtol: float = ZERO_MODE_RTOL) -> int:
    return int(np.sum(np.abs(spec.values) < rtol * sigma))


def strip_zero_modes(spec: Spectrum, ens: EnsembleSpec, rtol: float = ZERO_MODE_RTOL) -> Spectrum:
    """Remove the structural zero eigenvalues that the class and index imply."""
    k = ens.zero_modes
    if k == 0:
        return spec
    v = spec.values
    order = np.argsort(np.abs(v), kind="stable")
    drop = order[:k]
    if np.any(np.abs(v[drop]) >= rtol * ens.width):
        raise EnsembleError(f"expected {k} zero modes below {rtol * ens.width:.3g}, "
                            f"found {count_zero_modes(spec, ens.width, rtol)}")
    keep = np.ones(v.size, dtype=bool)
    keep[drop] = False
    labels = [lab for lab, kp in zip(spec.labels, keep) if kp] if spec.labels else []
    return Spectrum(v[keep], labels=labels, meta=dict(spec.meta, zero_modes_removed=k))


def positive_levels(spec: Spectrum, sigma: float, rtol: float = ZERO_MODE_RTOL) -> np.ndarray:
    """Positive eigenvalues, dropping numerical zero modes."""
    v = spec.values
    return v[v > rtol * sigma]


def _entry_variance(spec: EnsembleSpec) -> float:
    """E|H_ab|^2 for an off-diagonal entry of the dense Hermitian matrix."""
    s2 = spec.width ** 2
    return {"A": s2, "AI": s2 / 2, "AII": s2 / 2, "BD": s2 / 2, "C": s2 / 2}[spec.cls]


def semicircle_radius(spec: EnsembleSpec) -> float:
    """Edge of the semicircle for the Dyson classes and classes B/D, C."""
    if spec.cls not in ("A", "AI", "AII", "BD", "C"):
        raise EnsembleError(f"no semicircle for class {spec.cls}")
    return float(2.0 * np.sqrt(spec.dim * _entry_variance(spec)))


def soft_edge_scaling(spec: EnsembleSpec) -> tuple[float, float]:
    """(edge, scale) with (lambda_max - edge) / scale converging at the soft edge."""
    v = _entry_variance(spec)
    m = spec.dim
    edge = 2.0 * np.sqrt(m * v)
    return float(edge), float(np.sqrt(v) * m ** (-1.0 / 6.0))


def hard_edge_scale(spec: EnsembleSpec) -> float:
    """Factor kappa mapping positive levels lambda to microscopic units kappa*lambda.

    Chosen so that the mean density of positive levels near the origin is
    one in the new variable. For the chiral classes the finite-size shift
    N -> N + (number of extra columns)/2 is included.
    """
    s2 = spec.width ** 2
    n, nu = spec.n, spec.nu
    cls = spec.cls
    if cls in ("AIII", "BDI"):
        v = s2 / 2 if cls == "BDI" else s2
        return float(2.0 * np.sqrt(n + nu / 2.0) / (np.pi * np.sqrt(v)))
    if cls == "CII":
        # 2n x 2(n+nu) quaternion block with entry variance sigma^2/2, levels
        # doubly degenerate: the density of distinct levels is half.
        p = 2 * n + nu
        return float(np.sqrt(p) / (np.pi * np.sqrt(s2 / 2)))
    if cls in ("CI", "DIII"):
        p = spec.dim // 2
        v = s2 / 2
        deg = 2 if cls == "DIII" else 1
        return float(2.0 * np.sqrt(p) / (np.pi * np.sqrt(v)) / deg)
    if cls in ("BD", "C"):
        r = semicircle_radius(spec)
        return float(2.0 * spec.dim / (np.pi * r))
    raise EnsembleError(f"no hard edge for class {cls}")
