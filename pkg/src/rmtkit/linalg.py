"""Dense eigensolvers and the Pfaffian.

Eigenvalues only. Hermitian input goes through Householder reduction to a
real symmetric tridiagonal followed by implicit QL; chiral block matrices
[[0, W], [W^dagger, 0]] are handled by Golub-Kahan bidiagonalisation of W,
which yields the same tridiagonal problem at a quarter of the cost. General
complex matrices use Hessenberg reduction and single-shift QR with
Wilkinson shifts.

All kernels are compiled with numba (``nogil``), so callers may fan draws
out over threads.
"""
from __future__ import annotations

import numpy as np
from numba import njit

EPS = np.finfo(float).eps
SKEW_TOL = 1e-12


class ConvergenceError(RuntimeError):
    """Raised when an iterative eigensolver exceeds its iteration budget."""


# ---------------------------------------------------------------------------
# Householder helpers
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _reflector(x):
    """Unit vector v and alpha with (I - 2 v v^H) x = alpha e_1.

    Returns ``ok = False`` when x is already a multiple of e_1.
    """
    m = x.shape[0]
    v = x.copy()
    tail = 0.0
    for i in range(1, m):
        tail += x[i].real ** 2 + x[i].imag ** 2
    x0 = x[0]
    a0 = abs(x0)
    if tail == 0.0:
        return v, x0, False
    norm = np.sqrt(a0 * a0 + tail)
    phase = x0 / a0 if a0 > 0.0 else 1.0 + 0.0j
    alpha = -phase * norm
    v[0] = x0 - alpha
    vn = np.sqrt(abs(v[0]) ** 2 + tail)
    for i in range(m):
        v[i] = v[i] / vn
    return v, alpha, True


@njit(cache=True, nogil=True)
def _tridiagonalize(a):
    """Reduce a Hermitian matrix (complex128, overwritten) to tridiagonal.

    Returns the real diagonal and the moduli of the sub-diagonal; the
    phases of a Hermitian tridiagonal can always be removed by a diagonal
    unitary similarity, so the moduli carry the full spectrum.
    """
    n = a.shape[0]
    d = np.empty(n)
    e = np.zeros(n)
    for k in range(n - 2):
        x = a[k + 1:, k].copy()
        v, alpha, ok = _reflector(x)
        if ok:
            m = n - k - 1
            # p = A22 v, c = v^H p, w = p - c v;  A22 <- A22 - 2 v w^H - 2 w v^H
            p = np.zeros(m, dtype=np.complex128)
            for i in range(m):
                acc = 0.0 + 0.0j
                for j in range(m):
                    acc += a[k + 1 + i, k + 1 + j] * v[j]
                p[i] = acc
            c = 0.0 + 0.0j
            for i in range(m):
                c += np.conj(v[i]) * p[i]
            for i in range(m):
                p[i] = p[i] - c * v[i]
            cv = np.conj(v)
            cp = np.conj(p)
            for i in range(m):
                vi = 2.0 * v[i]
                pi = 2.0 * p[i]
                for j in range(m):
                    a[k + 1 + i, k + 1 + j] -= vi * cp[j] + pi * cv[j]
            a[k + 1, k] = alpha
        d[k] = a[k, k].real
        e[k] = abs(a[k + 1, k])
    if n >= 2:
        d[n - 2] = a[n - 2, n - 2].real
        e[n - 2] = abs(a[n - 1, n - 2])
    d[n - 1] = a[n - 1, n - 1].real
    return d, e


@njit(cache=True, nogil=True)
def _bidiagonalize(w):
    """Golub-Kahan reduction of a p x q matrix (p <= q) to upper bidiagonal.

    Returns moduli of the diagonal (length p) and super-diagonal (length
    p, last entry zero when p == q).
    """
    p, q = w.shape
    d = np.zeros(p)
    e = np.zeros(p)
    for k in range(p):
        # left reflector on column k, rows k..p-1
        if p - k > 1:
            x = w[k:, k].copy()
            v, alpha, ok = _reflector(x)
            if ok:
                s = np.zeros(q - k, dtype=np.complex128)
                for i in range(p - k):
                    cvi = np.conj(v[i])
                    for j in range(k, q):
                        s[j - k] += cvi * w[k + i, j]
                for i in range(p - k):
                    vi = 2.0 * v[i]
                    for j in range(k, q):
                        w[k + i, j] -= vi * s[j - k]
        d[k] = abs(w[k, k])
        # right reflector on row k, columns k+1..q-1
        if q - k - 1 > 1:
            x = np.conj(w[k, k + 1:].copy())
            v, alpha, ok = _reflector(x)
            if ok:
                # W[:, k+1:] <- W[:, k+1:] (I - 2 v v^H)^T-conj applied from the right
                for i in range(k, p):
                    s = 0.0 + 0.0j
                    for j in range(q - k - 1):
                        s += w[i, k + 1 + j] * v[j]
                    for j in range(q - k - 1):
                        w[i, k + 1 + j] -= 2.0 * s * np.conj(v[j])
        if k + 1 < q:
            e[k] = abs(w[k, k + 1])
    return d, e


# ---------------------------------------------------------------------------
# Implicit QL on a symmetric tridiagonal
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True, inline="always")
def _pythag(a, b):
    """sqrt(a^2 + b^2); plain formula unless squaring could over/underflow."""
    m = max(abs(a), abs(b))
    if 1e-150 < m < 1e150:
        return np.sqrt(a * a + b * b)
    return np.hypot(a, b)


@njit(cache=True, nogil=True)
def _tql(d, e, max_sweeps):
    """Eigenvalues of the symmetric tridiagonal (d, e); e[i] couples i, i+1.

    Returns (eigenvalues, status) with status 0 on success.
    """
    n = d.shape[0]
    d = d.copy()
    e = e.copy()
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= EPS * dd or abs(e[m]) < 1e-300:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_sweeps:
                return d, 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = _pythag(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = _pythag(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, 0


# ---------------------------------------------------------------------------
# Hessenberg + shifted QR for general complex matrices
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _hessenberg(a):
    n = a.shape[0]
    for k in range(n - 2):
        x = a[k + 1:, k].copy()
        v, alpha, ok = _reflector(x)
        if not ok:
            continue
        m = n - k - 1
        # rows: A[k+1:, k:] <- (I - 2vv^H) A[k+1:, k:]
        s = np.zeros(n - k, dtype=np.complex128)
        for i in range(m):
            cvi = np.conj(v[i])
            for j in range(k, n):
                s[j - k] += cvi * a[k + 1 + i, j]
        for i in range(m):
            vi = 2.0 * v[i]
            for j in range(k, n):
                a[k + 1 + i, j] -= vi * s[j - k]
        # columns: A[:, k+1:] <- A[:, k+1:] (I - 2vv^H)
        cv = np.conj(v)
        for i in range(n):
            t = 0.0 + 0.0j
            for j in range(m):
                t += a[i, k + 1 + j] * v[j]
            t = 2.0 * t
            for j in range(m):
                a[i, k + 1 + j] -= t * cv[j]
        for i in range(k + 2, n):
            a[i, k] = 0.0
    return a


@njit(cache=True, nogil=True)
def _hqr(h, max_iter_per_eig):
    """Eigenvalues of a complex upper Hessenberg matrix (overwritten)."""
    n = h.shape[0]
    ev = np.zeros(n, dtype=np.complex128)
    cs = np.zeros(n)
    sn = np.zeros(n, dtype=np.complex128)
    snc = np.zeros(n, dtype=np.complex128)
    hi = n - 1
    it = 0
    total = 0
    while hi >= 0:
        # look for a negligible sub-diagonal element
        lo = hi
        while lo > 0:
            t = abs(h[lo, lo]) + abs(h[lo - 1, lo - 1])
            if abs(h[lo, lo - 1]) <= EPS * t or abs(h[lo, lo - 1]) < 1e-300:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            ev[hi] = h[hi, hi]
            hi -= 1
            it = 0
            continue
        it += 1
        total += 1
        if it > max_iter_per_eig:
            return ev, 1
        # Wilkinson shift from the trailing 2x2 block
        a11 = h[hi - 1, hi - 1]
        a12 = h[hi - 1, hi]
        a21 = h[hi, hi - 1]
        a22 = h[hi, hi]
        if it % 11 == 10:
            mu = a22 + 0.75 * abs(a21) * (1.0 + 1.0j)
        else:
            half = 0.5 * (a11 - a22)
            disc = np.sqrt(half * half + a12 * a21)
            m1 = a22 - a12 * a21 / (half + disc) if abs(half + disc) > 0 else a22
            m2 = a22 - a12 * a21 / (half - disc) if abs(half - disc) > 0 else a22
            mu = m1 if abs(m1 - a22) <= abs(m2 - a22) else m2
        for k in range(lo, hi + 1):
            h[k, k] -= mu
        # QR: row rotations
        for k in range(lo, hi):
            x = h[k, k]
            y = h[k + 1, k]
            ax = abs(x)
            r = np.sqrt(ax * ax + abs(y) ** 2)
            if r == 0.0:
                c = 1.0
                s = 0.0 + 0.0j
            elif ax == 0.0:
                c = 0.0
                s = np.conj(y) / abs(y)
            else:
                c = ax / r
                s = (x / ax) * np.conj(y) / r
            cs[k] = c
            sn[k] = s
            sc = np.conj(s)
            for j in range(k, hi + 1):
                u = h[k, j]
                w = h[k + 1, j]
                h[k, j] = c * u + s * w
                h[k + 1, j] = c * w - sc * u
        for k in range(lo, hi):
            snc[k] = np.conj(sn[k])
        # RQ: column rotations. Rotation k only mixes columns k, k+1 of
        # rows up to k + 1, so each row can be swept left to right in one
        # contiguous pass.
        for i in range(lo, hi + 1):
            k0 = i - 1 if i - 1 > lo else lo
            u = h[i, k0]
            for k in range(k0, hi):
                c = cs[k]
                s = sn[k]
                w = h[i, k + 1]
                h[i, k] = c * u + snc[k] * w
                u = c * w - s * u
            h[i, hi] = u
        for k in range(lo, hi + 1):
            h[k, k] += mu
    return ev, 0


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------

def eigvalsh(h: np.ndarray, max_sweeps: int = 60) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian (or real symmetric) matrix."""
    a = np.array(h, dtype=np.complex128, order="C", copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if a.shape[0] == 0:
        return np.zeros(0)
    d, e = _tridiagonalize(a)
    w, status = _tql(d, e, max_sweeps)
    if status:
        raise ConvergenceError("implicit QL did not converge")
    return np.sort(w)


def eigvals_tridiagonal(d: np.ndarray, e: np.ndarray, max_sweeps: int = 60) -> np.ndarray:
    """Ascending eigenvalues of a real symmetric tridiagonal matrix."""
    d = np.asarray(d, dtype=float)
    ee = np.zeros(d.shape[0])
    ee[: len(e)] = np.abs(np.asarray(e, dtype=float))
    w, status = _tql(d, ee, max_sweeps)
    if status:
        raise ConvergenceError("implicit QL did not converge")
    return np.sort(w)


def eigvals_chiral(w: np.ndarray, max_sweeps: int = 60) -> np.ndarray:
    """Ascending eigenvalues of [[0, W], [W^dagger, 0]] without forming it.

    W is reduced to bidiagonal form; the interleaved Golub-Kahan
    tridiagonal (zero diagonal) is then diagonalised by implicit QL. The
    |p - q| structural zero modes are returned as exact zeros, apart from
    one that sits inside the tridiagonal chain.
    """
    a = np.array(w, dtype=np.complex128, order="C", copy=True)
    if a.shape[0] > a.shape[1]:
        a = np.ascontiguousarray(a.T)
    p, q = a.shape
    d, e = _bidiagonalize(a)
    chain = np.empty(2 * p)
    chain[0::2] = d
    chain[1::2] = e
    size = 2 * p + (1 if q > p else 0)
    off = np.zeros(size)
    off[: size - 1] = chain[: size - 1]
    vals, status = _tql(np.zeros(size), off, max_sweeps)
    if status:
        raise ConvergenceError("implicit QL did not converge")
    extra = np.zeros(max(q - p - 1, 0))
    return np.sort(np.concatenate([vals, extra]))


def eigvals(a: np.ndarray, max_iter_per_eig: int = 60) -> np.ndarray:
    """Eigenvalues of a general square matrix via Hessenberg + shifted QR."""
    h = np.array(a, dtype=np.complex128, order="C", copy=True)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("expected a square matrix")
    if h.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    _hessenberg(h)
    ev, status = _hqr(h, max_iter_per_eig)
    if status:
        raise ConvergenceError("shifted QR did not converge")
    return ev


# ---------------------------------------------------------------------------
# Pfaffian (Parlett-Reid elimination with pivoting)
# ---------------------------------------------------------------------------

def slogpf(a: np.ndarray):
    """Sign (or phase) and log-modulus of the Pfaffian of a skew matrix.

    Skew-symmetric Gaussian elimination in the Parlett-Reid form: two
    columns are eliminated per step, pivoting on the largest entry of the
    current column. Pivot logs are accumulated to avoid overflow.
    """
    a = np.array(a, copy=True)
    if a.dtype.kind not in "fc":
        a = a.astype(float)
    n = a.shape[0]
    if a.ndim != 2 or n != a.shape[1]:
        raise ValueError("expected a square matrix")
    if n % 2 == 1:
        raise ValueError("the Pfaffian needs an even-dimensional matrix")
    scale = float(np.max(np.abs(a), initial=0.0))
    if np.max(np.abs(a + a.T), initial=0.0) > SKEW_TOL * max(scale, 1.0):
        raise ValueError("matrix is not antisymmetric")
    one = np.ones((), dtype=a.dtype)[()]
    sign = one
    logabs = 0.0
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            sign = -sign
        piv = a[k, k + 1]
        if piv == 0:
            return 0 * one, -np.inf
        apiv = abs(piv)
        sign = sign * (piv / apiv)
        logabs += np.log(apiv)
        if k + 2 < n:
            tau = a[k, k + 2:] / piv
            col = a[k + 2:, k + 1].copy()
            a[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return sign, logabs


def pfaffian(a: np.ndarray):
    """Pfaffian of a skew-symmetric matrix (odd size or asymmetry raise ValueError)."""
    sign, logabs = slogpf(a)
    if logabs == -np.inf:
        return sign * 0
    return sign * np.exp(logabs)
