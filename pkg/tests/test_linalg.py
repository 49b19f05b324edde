from __future__ import annotations


import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linear_sum_assignment

from rmtkit import linalg


def _herm(rng, n, complex_=True):
    g = rng.normal(size=(n, n)) + (1j * rng.normal(size=(n, n)) if complex_ else 0)
    return 0.5 * (g + g.conj().T)


def _match(a, b):
    c = np.abs(a[:, None] - b[None, :])
    r, k = linear_sum_assignment(c)
    return float(c[r, k].max())


@pytest.mark.parametrize("n", [1, 2, 5, 40, 120])
@pytest.mark.parametrize("complex_", [False, True])
def test_eigvalsh_matches_lapack(n, complex_):
    h = _herm(np.random.default_rng(n), n, complex_)
    ours = linalg.eigvalsh(h)
    assert np.all(np.diff(ours) >= 0)
    assert np.allclose(ours, np.linalg.eigvalsh(h), atol=1e-11 * max(1.0, np.abs(h).max()) * n)


def test_eigvalsh_residual_bound():
    # an eigenvalue lam of H makes H - lam I singular: its smallest singular value is the residual
    h = _herm(np.random.default_rng(1), 60)
    norm = np.linalg.norm(h, 2)
    for lam in linalg.eigvalsh(h):
        smin = np.linalg.svd(h - lam * np.eye(60), compute_uv=False)[-1]
        assert smin <= 1e-10 * norm


def test_eigvalsh_diagonal_and_degenerate():
    assert np.array_equal(linalg.eigvalsh(np.diag([2.0, 1.0])), [1.0, 2.0])
    assert np.allclose(linalg.eigvalsh(np.eye(4)), 1.0)
    assert linalg.eigvalsh(np.zeros((0, 0))).size == 0


def test_eigvals_tridiagonal():
    n = 30
    d = np.random.default_rng(3).normal(size=n)
    e = np.random.default_rng(4).normal(size=n - 1)
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.allclose(linalg.eigvals_tridiagonal(d, e), np.linalg.eigvalsh(t), atol=1e-12)


@pytest.mark.parametrize("p,q", [(1, 1), (3, 3), (3, 5), (40, 41), (50, 50), (7, 4)])
def test_eigvals_chiral_matches_singular_values(p, q):
    rng = np.random.default_rng(p * 100 + q)
    w = rng.normal(size=(p, q)) + 1j * rng.normal(size=(p, q))
    sv = np.linalg.svd(w, compute_uv=False)
    ref = np.sort(np.concatenate([sv, -sv, np.zeros(abs(q - p))]))
    ours = linalg.eigvals_chiral(w)
    assert ours.size == p + q
    assert np.allclose(ours, ref, atol=1e-11 * max(p, q))


@pytest.mark.parametrize("n", [1, 2, 6, 50, 150])
def test_general_eigvals_match_lapack(n):
    rng = np.random.default_rng(n)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    ours = linalg.eigvals(a)
    assert _match(ours, np.linalg.eigvals(a)) <= 1e-10 * max(1.0, np.linalg.norm(a, 2))


def test_general_eigvals_real_input_and_triangular():
    a = np.triu(np.arange(1.0, 17.0).reshape(4, 4))
    assert np.allclose(np.sort(linalg.eigvals(a).real), [1.0, 6.0, 11.0, 16.0])
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert _match(linalg.eigvals(rot), np.array([1j, -1j])) < 1e-14


def test_pfaffian_small_cases():
    assert np.isclose(linalg.pfaffian(np.array([[0.0, 3.0], [-3.0, 0.0]])), 3.0)
    # Pf of the 4x4 matrix: a12 a34 - a13 a24 + a14 a23
    a = np.zeros((4, 4))
    a[0, 1], a[0, 2], a[0, 3], a[1, 2], a[1, 3], a[2, 3] = 1.0, 2.0, 3.0, 4.0, 5.0, 6.0
    a = a - a.T
    assert np.isclose(linalg.pfaffian(a), 1 * 6 - 2 * 5 + 3 * 4)


def _pf_brute(a):
    """Pfaffian from the perfect-matching expansion."""
    n = a.shape[0]
    if n == 0:
        return 1.0
    total = 0.0
    for j in range(1, n):
        rest = [k for k in range(1, n) if k != j]
        sub = a[np.ix_(rest, rest)]
        total += (-1) ** (j + 1) * a[0, j] * _pf_brute(sub)
    return total


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_pfaffian_matches_matching_expansion(n):
    g = np.random.default_rng(n).normal(size=(n, n))
    a = g - g.T
    assert np.isclose(linalg.pfaffian(a), _pf_brute(a), rtol=1e-12)


def test_pfaffian_block_identity():
    # Pf [[0, h], [-h^T, 0]] = (-1)^{n(n-1)/2} det h
    for n in (1, 2, 3, 4):
        h = np.random.default_rng(10 + n).normal(size=(n, n))
        a = np.block([[np.zeros((n, n)), h], [-h.T, np.zeros((n, n))]])
        assert np.isclose(linalg.pfaffian(a), (-1) ** (n * (n - 1) // 2) * np.linalg.det(h), rtol=1e-12)


def test_pfaffian_complex():
    rng = np.random.default_rng(5)
    g = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    a = g - g.T
    assert np.isclose(linalg.pfaffian(a), _pf_brute(a), rtol=1e-12)


def test_pfaffian_rejects_bad_input():
    with pytest.raises(ValueError):
        linalg.pfaffian(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        linalg.pfaffian(np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_pfaffian_singular_is_zero():
    a = np.zeros((4, 4))
    a[0, 1], a[1, 0] = 1.0, -1.0
    assert linalg.pfaffian(a) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2 ** 32 - 1))
def test_pfaffian_squared_is_det(half, seed):
    n = 2 * half
    g = np.random.default_rng(seed).normal(size=(n, n))
    a = g - g.T
    det = np.linalg.det(a)
    assert abs(linalg.pfaffian(a) ** 2 - det) <= 1e-10 * max(abs(det), 1e-300)


def test_slogpf_large_no_overflow():
    n = 400
    g = np.random.default_rng(0).normal(size=(n, n)) * 1e3
    a = g - g.T
    sign, logabs = linalg.slogpf(a)
    assert np.isfinite(logabs) and abs(abs(sign) - 1) < 1e-12
    assert np.isclose(2 * logabs, np.linalg.slogdet(a)[1], rtol=1e-10)
