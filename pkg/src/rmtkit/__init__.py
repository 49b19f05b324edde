"""Random-matrix spectral statistics: ensembles, unfolding, observables and exact benchmarks."""
from __future__ import annotations

__version__ = "0.1.0"

from .spectra import (ComplexSpectrum, Curve, Histogram, Spectrum, SpectrumFormatError,  # noqa: E402
                      empirical_cdf, parse_series, parse_spectrum, read_series, read_spectrum,
                      split_by_labels, write_series, write_spectrum)
from .ensembles import (EnsembleSpec, MatrixSample, kramers_reduce, sample_matrix,  # noqa: E402
                        sample_spectra, sample_spectrum, strip_zero_modes)
from .unfolding import DensityModel, UnfoldedSpectrum, fit_density, mean_level_spacing, unfold  # noqa: E402
from .kernels import (Kernel, bulk_kernel, det_kpoint, finite_n_kernel, hard_edge_kernel,  # noqa: E402
                      pf_kpoint, soft_edge_kernel)
from .fredholm import extreme_cdf, fredholm_det, fredholm_pfaffian, gap_probability, spacing_exact  # noqa: E402
