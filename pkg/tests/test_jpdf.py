from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from rmtkit import jpdf as J

levels = st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=6)


def test_vandermonde_examples():
    assert J.vandermonde([0.0, 1.0]) == 1.0
    assert J.vandermonde([1.0, 2.0, 3.0]) == 2.0
    assert J.vandermonde([1.0, 4.0, 1.0]) == 0.0
    assert J.vandermonde([]) == 1.0 and J.vandermonde([7.0]) == 1.0
    assert np.isclose(J.log_abs_vandermonde(np.array([1.0, 2.0, 4.0])), np.log(1 * 3 * 2))


def test_vandermonde_matches_determinant():
    x = np.random.default_rng(0).normal(size=5)
    assert np.isclose(J.vandermonde(x), np.linalg.det(np.vander(x, increasing=True)))


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_dyson_coincidence_is_minus_inf(beta):
    assert J.log_jpdf_dyson([0.3, 0.3, 1.0], beta) == -np.inf


@settings(max_examples=50)
@given(levels, st.sampled_from([1, 2, 4]), st.randoms(use_true_random=False))
def test_dyson_exchange_symmetry(e, beta, rnd):
    perm = list(e)
    rnd.shuffle(perm)
    a, b = J.log_jpdf_dyson(e, beta), J.log_jpdf_dyson(perm, beta)
    assert (a == b == -np.inf) or np.isclose(a, b, rtol=1e-12, atol=1e-12)


def _dyson_mass_n2(beta, sigma=None):
    # the integrand is smooth on each side of the diagonal; integrate y < x and double
    f = lambda y, x: np.exp(J.log_jpdf_dyson([x, y], beta, sigma))
    val, _ = integrate.dblquad(f, -12, 12, lambda x: -12, lambda x: x, epsabs=1e-12, epsrel=1e-10)
    return 2 * val


@pytest.mark.parametrize("beta,sigma", [(1, None), (2, None), (4, None), (2, 0.7), (1, 1.3)])
def test_dyson_normalisation_n2(beta, sigma):
    assert abs(_dyson_mass_n2(beta, sigma) - 1.0) < 1e-6


def test_dyson_normalisation_n2_tensor_grid():
    x = np.linspace(-8, 8, 801)
    X, Y = np.meshgrid(x, x, indexing="ij")
    vals = np.exp(J.log_norm_dyson(2, 2) - 0.5 * (X ** 2 + Y ** 2)) * (X - Y) ** 2
    h = x[1] - x[0]
    assert abs(vals.sum() * h * h - 1.0) < 1e-6


def test_dyson_n1_is_gaussian():
    x = 0.7
    assert np.isclose(np.exp(J.log_jpdf_dyson([x], 2)), np.exp(-x * x / 2) / np.sqrt(2 * np.pi))
    # beta = 4 default width sqrt(2): weight exp(-x^2/2) as well
    assert np.isclose(np.exp(J.log_jpdf_dyson([x], 4)), np.exp(-x * x / 2) / np.sqrt(2 * np.pi))


def test_az_zero_level_and_sign_invariance():
    assert J.log_jpdf_az([0.0, 1.0], 1, 2) == -np.inf
    assert np.isfinite(J.log_jpdf_az([0.0, 1.0], 0, 1))
    e = np.array([0.4, 1.1, 2.0])
    assert np.isclose(J.log_jpdf_az(e, 3, 4), J.log_jpdf_az(e * np.array([-1, 1, -1]), 3, 4))
    assert J.log_jpdf_az([0.5, -0.5], 1, 2) == -np.inf
    with pytest.raises(J.JpdfError):
        J.log_jpdf_az([1.0], -1, 2)


def test_az_normalisation_n1_alpha1_beta2():
    val, _ = integrate.quad(lambda x: np.exp(J.log_jpdf_az([x], 1, 2)), 0, np.inf, epsabs=1e-13)
    assert abs(val - 1.0) < 1e-8


@pytest.mark.parametrize("alpha,beta", [(1, 2), (3, 2), (1, 1), (3, 4), (5, 4), (2, 2)])
def test_az_normalisation_n2(alpha, beta):
    f = lambda y, x: np.exp(J.log_jpdf_az([x, y], alpha, beta))
    val, _ = integrate.dblquad(f, 0, 10, lambda x: 0, lambda x: x, epsabs=1e-12, epsrel=1e-10)
    assert abs(2 * val - 1.0) < 1e-6


def test_az_bulk_factorisation():
    # far from the origin the two-level density is |E1 - E2|^beta times one-body factors
    alpha, beta, e0 = 3, 2, 40.0
    c = 1.0
    d = np.linspace(-0.1, 0.1, 9)
    ratios = []
    for d1 in d:
        for d2 in d:
            if d1 == d2:
                continue
            e1, e2 = e0 + d1, e0 + d2
            full = J.log_jpdf_az([e1, e2], alpha, beta)
            local = beta * np.log(abs(e1 - e2)) + alpha * np.log(e1 * e2) - c * (e1 * e1 + e2 * e2)
            ratios.append(full - local)
    ratios = np.exp(np.array(ratios) - np.median(ratios))
    assert np.max(np.abs(ratios - 1.0)) < 0.01


def test_ginibre_degenerate_cases():
    assert J.log_jpdf_ginibre([1 + 1j, 1 + 1j], "complex") == -np.inf
    assert J.log_jpdf_ginibre([1.0 + 0j, 2 + 1j], "quaternion") == -np.inf
    with pytest.raises(J.JpdfError):
        J.log_jpdf_ginibre([1j], "real")


def test_ginibre_complex_normalisation_n1():
    f = lambda r: 2 * np.pi * r * np.exp(J.log_jpdf_ginibre([r + 0j], "complex"))
    val, _ = integrate.quad(f, 0, np.inf, epsabs=1e-13)
    assert abs(val - 1.0) < 1e-8


def test_ginibre_quaternion_normalisation_n1():
    f = lambda th, r: r * np.exp(J.log_jpdf_ginibre([r * np.exp(1j * th)], "quaternion"))
    val, _ = integrate.dblquad(f, 0, 15, 0, np.pi, epsabs=1e-12, epsrel=1e-10)
    assert abs(val - 1.0) < 1e-8


def test_ginibre_quaternion_pair_product():
    z = np.array([0.3 + 0.8j, -1.0 + 0.2j, 0.5 + 1.5j])
    direct = 0.0
    for a in range(3):
        for b in range(a + 1, 3):
            direct += 2 * np.log(abs(z[a] - z[b])) + 2 * np.log(abs(z[a] - np.conj(z[b])))
    direct += 2 * np.sum(np.log(np.abs(z - np.conj(z)))) - np.sum(np.abs(z) ** 2) / 2.0
    assert np.isclose(J.log_jpdf_ginibre(z, "quaternion"), J.log_norm_ginibre(3, "quaternion") + direct)


@settings(max_examples=30)
@given(st.lists(st.tuples(st.floats(-3, 3), st.floats(0.05, 3)), min_size=1, max_size=5),
       st.sampled_from(["complex", "quaternion"]), st.randoms(use_true_random=False))
def test_ginibre_exchange_symmetry(pts, kind, rnd):
    z = [complex(a, b) for a, b in pts]
    perm = list(z)
    rnd.shuffle(perm)
    a, b = J.log_jpdf_ginibre(z, kind), J.log_jpdf_ginibre(perm, kind)
    assert (a == b == -np.inf) or np.isclose(a, b, rtol=1e-12, atol=1e-12)
