"""Acceptance suite: one test per criterion, fixed seeds, each printing a PASS/FAIL line.

Run with ``pytest -v -s tests/test_acceptance.py`` to see the report lines.
The Monte-Carlo ensembles shared by several criteria are built once per
module. On one CPU the whole file takes roughly a quarter of an hour.
"""
from __future__ import annotations

import time

import numpy as np
import pytest
from scipy import integrate

from rmtkit import benchmarks as B
from rmtkit import ensembles as E
from rmtkit import fredholm as F
from rmtkit import jpdf as J
from rmtkit import kernels as K
from rmtkit import linalg
from rmtkit import observables as O
from rmtkit import unfolding as U

pytestmark = pytest.mark.acceptance

GUE_N = 100
GUE_DRAWS = 20000
GUE_SEED = 2024


def report(number: int, label: str, ok: bool, detail: str) -> None:
    print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {label}: {detail}")
    assert ok, f"criterion {number} ({label}) failed: {detail}"


@pytest.fixture(scope="module")
def gue_unfolded():
    """GUE n=100 spectra unfolded with the semicircle, with the sampling time."""
    spec = E.EnsembleSpec("A", GUE_N)
    model = U.semicircle(E.semicircle_radius(spec))
    t0 = time.perf_counter()
    first = E.sample_spectra(spec, GUE_SEED, 5000)
    t_first = time.perf_counter() - t0
    rest = E.sample_spectra(spec, GUE_SEED, GUE_DRAWS - 5000, start=5000)
    return [U.unfold(s, model) for s in first + rest], t_first


@pytest.fixture(scope="module")
def exact_beta2():
    return F.spacing_exact(2, np.arange(0.0, 4.0 + 1e-12, 0.025))


def _curve_fn(curve):
    return lambda s: np.interp(s, curve.x, curve.y, right=0.0)


# ---------------------------------------------------------------------------
# 1. Surmise vs exact spacing
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("beta,bound", [(2, 0.015), (1, 0.02), (4, 0.02)])
def test_criterion_01_surmise_vs_exact(beta, bound):
    grid = np.arange(0.0, 3.0 + 1e-12, 0.05)
    t0 = time.perf_counter()
    p = F.spacing_exact(beta, grid)
    elapsed = time.perf_counter() - t0
    sup = float(np.max(np.abs(p.y - B.wigner_surmise(beta, grid))))
    report(1, f"beta={beta} exact vs surmise", sup <= bound and elapsed <= 120.0,
           f"sup {sup:.4f} (bound {bound}), {elapsed:.1f} s (bound 120 s)")


# ---------------------------------------------------------------------------
# 2. GUE pipeline
# ---------------------------------------------------------------------------

def test_criterion_02_gue_pipeline(gue_unfolded, exact_beta2):
    unfolded, t_sample = gue_unfolded
    hist = O.spacing_histogram(unfolded[:5000])
    sup = O.sup_distance(hist, lambda s: B.wigner_surmise(2, s))
    l2_surmise = O.l2_residual(hist, lambda s: B.wigner_surmise(2, s))
    l2_exact = O.l2_residual(hist, _curve_fn(exact_beta2))
    ok = sup <= 0.02 and l2_exact < l2_surmise and t_sample <= 300.0
    report(2, "GUE spacing histogram", ok,
           f"sup vs surmise {sup:.4f} (bound 0.02); L2 exact {l2_exact:.2e} < surmise {l2_surmise:.2e}; "
           f"sampling {t_sample:.1f} s on one thread")


# ---------------------------------------------------------------------------
# 3. Poisson control
# ---------------------------------------------------------------------------

def test_criterion_03_poisson_control():
    rng = np.random.default_rng(3)
    x = np.sort(rng.uniform(0.0, 1.0, 100_000))
    unfolded = U.unfold(x, U.fit_density(x, "polynomial_cdf"))
    ks = O.ks_distance(O.normalised_spacings(unfolded), B.poisson_spacing_cdf)
    r = O.spacing_ratios(unfolded).mean
    oracle = 2.0 * np.log(2.0) - 1.0
    ok = ks <= 0.01 and abs(r - 0.386) <= 0.005 and abs(oracle - 0.386) <= 0.005
    report(3, "Poisson control", ok,
           f"KS {ks:.4f} (bound 0.01); mean ratio {r:.4f} (0.386 +- 0.005, oracle 2 ln 2 - 1 = {oracle:.4f})")


# ---------------------------------------------------------------------------
# 4. beta = 4 pipeline
# ---------------------------------------------------------------------------

def test_criterion_04_symplectic_pipeline():
    spec = E.EnsembleSpec("AII", 100)
    model = U.semicircle(E.semicircle_radius(spec))
    unfolded = [U.unfold(E.kramers_reduce(s), model) for s in E.sample_spectra(spec, 4, 3000)]
    hist = O.spacing_histogram(unfolded)
    sup = O.sup_distance(hist, lambda s: B.wigner_surmise(4, s))
    report(4, "AII spacing vs surmise beta=4", sup <= 0.02, f"sup {sup:.4f} (bound 0.02), 3000 draws")


# ---------------------------------------------------------------------------
# 5. Hard edge
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("nu", [0, 1])
def test_criterion_05_hard_edge(nu):
    spec = E.EnsembleSpec("AIII", 100, nu=nu)
    kappa = E.hard_edge_scale(spec)
    draws = 10_000
    edges = np.arange(0.0, 3.0 + 1e-12, 0.25)
    counts = np.zeros(edges.size - 1)
    zero_counts = set()
    for d in range(draws):
        s = E.sample_spectrum(spec, 5 + nu, d)
        zero_counts.add(E.count_zero_modes(s, spec.width))
        lam = kappa * E.positive_levels(s, spec.width)
        counts += np.histogram(lam, edges)[0]
    dens = counts / (draws * np.diff(edges))
    ref = O.bin_average(lambda x: K.hard_edge_density(2, 2 * nu + 1, x), edges)
    sup = float(np.max(np.abs(dens - ref)))
    ok = zero_counts == {nu} and sup <= 0.05
    report(5, f"AIII hard edge nu={nu}", ok,
           f"zero modes per draw {sorted(zero_counts)} (expected [{nu}]); density sup {sup:.4f} (bound 0.05)")


# ---------------------------------------------------------------------------
# 6. Soft edge
# ---------------------------------------------------------------------------

def test_criterion_06_tracy_widom():
    spec = E.EnsembleSpec("A", 200)
    edge, scale = E.soft_edge_scaling(spec)
    x = np.sort([(E.sample_spectrum(spec, 6, d).values[-1] - edge) / scale for d in range(10_000)])
    grid = np.arange(-5.0, 2.0 + 1e-12, 0.05)
    cdf = F.extreme_cdf(K.soft_edge_kernel(2), grid)
    emp = np.searchsorted(x, grid, side="right") / x.size
    sup = float(np.max(np.abs(emp - cdf.y)))
    report(6, "largest GUE level vs soft-edge CDF", sup <= 0.02, f"sup {sup:.4f} (bound 0.02)")


# ---------------------------------------------------------------------------
# 7. Number variance
# ---------------------------------------------------------------------------

def test_criterion_07_number_variance(gue_unfolded):
    unfolded, _ = gue_unfolded
    L = np.linspace(3.0, 10.0, 15)
    nv = O.number_variance(unfolded, L)
    dev = float(np.max(np.abs(nv.y - B.numvar_asymptotic(2, nv.x))))
    rng = np.random.default_rng(8)
    poisson = [np.sort(rng.uniform(0.0, 2000.0, 2000)) for _ in range(1000)]
    pv = O.number_variance(poisson, L)
    rel = float(np.max(np.abs(pv.y - pv.x) / pv.x))
    ok = nv.x.size == L.size and dev <= 0.05 and rel <= 0.03
    report(7, "number variance", ok, f"GUE max dev {dev:.4f} (bound 0.05); Poisson max rel dev {rel:.4f} (bound 0.03)")


# ---------------------------------------------------------------------------
# 8. Form factor
# ---------------------------------------------------------------------------

def test_criterion_08_form_factor(gue_unfolded):
    unfolded, _ = gue_unfolded
    k = np.linspace(0.1, 3.0, 30)
    sff = O.form_factor(unfolded, k, window=(20.0, 80.0))
    dev = float(np.max(np.abs(sff.y - B.sff_closed(2, k))))
    rng = np.random.default_rng(8)
    poisson = [np.sort(rng.uniform(0.0, 200.0, 200)) for _ in range(40_000)]
    pf = O.form_factor(poisson, k, window=(40.0, 160.0))
    pdev = float(np.max(np.abs(pf.y - 1.0)))
    report(8, "form factor", dev <= 0.03 and pdev <= 0.03,
           f"GUE max dev {dev:.4f} (bound 0.03); Poisson max dev {pdev:.4f} (bound 0.03)")


# ---------------------------------------------------------------------------
# 9. Complex Ginibre
# ---------------------------------------------------------------------------

def test_criterion_09_ginue():
    n = 500
    spec = E.EnsembleSpec("GinUE", n)
    zs = [E.sample_spectrum(spec, 9, d) for d in range(200)]
    radius = np.sqrt(2 * n) * spec.width
    window = (0.0, 0.8 * radius)
    hist = O.complex_spacings(zs, window=window, width=0.25)
    sup = O.sup_distance(hist, B.ginue_spacing)
    grid = np.linspace(0.0, 1.2, 121)
    rc = O.radial_cdf(zs, radius, grid)
    rdev = float(np.max(np.abs(rc.y - np.minimum(grid, 1.0) ** 2)))
    # mean nearest-neighbour distance at density 1/pi; the sampled density is 1/(2 pi sigma^2)
    d = np.concatenate([O.nearest_neighbour_distances(z, window) for z in zs])
    s_hat_mc = float(np.mean(d)) / (np.sqrt(2.0) * spec.width)
    s_hat = B.ginue_s_hat()
    ok = sup <= 0.02 and rdev <= 0.02 and abs(s_hat - 1.143) <= 0.01 and abs(s_hat_mc - 1.143) <= 0.01
    report(9, "GinUE", ok,
           f"spacing sup {sup:.4f} (bound 0.02); radial CDF dev {rdev:.4f} (bound 0.02); "
           f"s_hat {s_hat:.4f}, Monte Carlo {s_hat_mc:.4f} (1.143 +- 0.01)")


# ---------------------------------------------------------------------------
# 10. Determinantal consistency
# ---------------------------------------------------------------------------

def test_criterion_10_determinantal_consistency():
    # kernel diagonal vs brute-force marginal of the N=2 joint density
    kern = K.finite_n_kernel("hermite", 2)
    xs = np.linspace(-4.0, 4.0, 41)

    def marginal2(x):
        val, _ = integrate.quad(lambda y: np.exp(J.log_jpdf_dyson([x, y], 2)), -np.inf, np.inf,
                                epsabs=1e-13, epsrel=1e-12, points=None)
        return 2.0 * val

    brute = np.array([marginal2(x) for x in xs])
    diag_dev = float(np.max(np.abs(kern.density(xs) - brute)))

    # sampled N=3 marginal vs tensor Gauss-Hermite quadrature of the joint density
    t, w = np.polynomial.hermite_e.hermegauss(12)
    Y, Z = np.meshgrid(t, t, indexing="ij")
    W = np.outer(w, w) * np.exp(0.5 * (Y ** 2 + Z ** 2))

    def marginal3(x):
        vals = np.array([[np.exp(J.log_jpdf_dyson([x, y, z], 2)) for z in t] for y in t])
        return float(np.sum(W * vals))

    edges = np.arange(-4.0, 4.0 + 1e-12, 0.1)
    spec = E.EnsembleSpec("A", 3)
    counts = np.zeros(edges.size - 1)
    draws = 1_000_000
    chunk = []
    for d in range(draws):
        chunk.append(E.sample_spectrum(spec, 10, d).values)
        if len(chunk) == 50_000:
            counts += np.histogram(np.concatenate(chunk), edges)[0]
            chunk = []
    if chunk:
        counts += np.histogram(np.concatenate(chunk), edges)[0]
    dens = counts / (3 * draws * np.diff(edges))
    ref = O.bin_average(np.vectorize(marginal3), edges, points=8)
    mc_dev = float(np.max(np.abs(dens - ref)))
    report(10, "determinantal consistency", diag_dev <= 1e-8 and mc_dev <= 0.02,
           f"N=2 kernel vs jpdf marginal {diag_dev:.2e} (bound 1e-8); N=3 sampled marginal sup {mc_dev:.4f} (bound 0.02)")


# ---------------------------------------------------------------------------
# 11. Operator numerics
# ---------------------------------------------------------------------------

def test_criterion_11_operator_numerics(gue_unfolded):
    rng = np.random.default_rng(11)
    pf_dev = 0.0
    for n in range(2, 21, 2):
        for _ in range(5):
            g = rng.normal(size=(n, n))
            a = g - g.T
            det = np.linalg.det(a)
            pf = linalg.pfaffian(a)
            pf_dev = max(pf_dev, abs(pf * pf - det) / max(abs(det), 1e-300))

    cases = [(K.bulk_kernel(2), [(-0.5, 0.5)]), (K.bulk_kernel(2), [(-1.5, 1.5)]),
             (K.soft_edge_kernel(2), [(-2.0, 8.0)]), (K.hard_edge_kernel(2, 1), [(0.0, 2.0)]),
             (K.bulk_kernel(1), [(-1.0, 1.0)]), (K.bulk_kernel(4), [(-1.0, 1.0)])]
    doubling = max(abs(F.gap_probability(k, iv, 32) - F.gap_probability(k, iv, 64)) for k, iv in cases)

    # void frequency of unit intervals in the unfolded GUE bulk
    unfolded, _ = gue_unfolded
    starts = np.arange(20.0, 79.0, 2.0)
    empty = total = 0
    for u in unfolded:
        v = u.values
        hits = np.searchsorted(v, starts + 1.0) - np.searchsorted(v, starts)
        empty += int(np.sum(hits == 0))
        total += starts.size
    mc = empty / total
    exact = F.gap_probability(K.bulk_kernel(2), [(-0.5, 0.5)])
    gap_dev = abs(mc - exact)
    ok = pf_dev <= 1e-10 and doubling <= 1e-9 and gap_dev <= 0.005
    report(11, "operator numerics", ok,
           f"Pf^2 vs det rel {pf_dev:.2e} (bound 1e-10); order doubling {doubling:.2e} (bound 1e-9); "
           f"gap(1) {exact:.4f} vs void frequency {mc:.4f}, dev {gap_dev:.4f} (bound 0.005)")


# ---------------------------------------------------------------------------
# 12. Unfolding at the soft edge and Tricomi
# ---------------------------------------------------------------------------

def test_criterion_12_edge_unfolding():
    mu = np.linspace(-20.0, -3.0, 171)
    flat = B.soft_edge_density_in_bulk_units(mu, 2)
    flat_dev = float(np.max(np.abs(flat - 1.0)))
    a, b = B.tricomi_endpoints(lambda x: x)
    rho0 = float(B.tricomi_density(lambda x: x, np.array([0.0]), endpoints=(a, b))[0])
    end_dev = max(abs(a + np.sqrt(2.0)), abs(b - np.sqrt(2.0)))
    rho_dev = abs(rho0 - np.sqrt(2.0) / np.pi)
    ok = flat_dev <= 0.02 and end_dev <= 1e-6 and rho_dev <= 1e-4
    report(12, "edge unfolding and Tricomi", ok,
           f"soft-edge density in bulk units max |rho - 1| {flat_dev:.4f} for mu <= -3 (bound 0.02); "
           f"endpoints dev {end_dev:.1e} (bound 1e-6); rho(0) dev {rho_dev:.1e} (bound 1e-4)")
