# cython: language_level=3
"""Compiled batch kernels: tight per-draw loops over pre-drawn normals.

Same function surface and normal layouts as the numpy fallback.  Hermitian
eigenproblems (dims <= 16) are solved with cyclic Jacobi rotations, converged
when the off-diagonal Frobenius mass drops below 1e-14 of the matrix norm.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, sqrt

cnp.import_array()

BACKEND_NAME = "compiled"

DEF MAXN = 16

cdef double JACOBI_RTOL = 1e-14
cdef int JACOBI_MAX_SWEEPS = 60


cdef void _jacobi(double complex* a, double* w, double complex* v, int n,
                  bint want_vectors) noexcept nogil:
    """Diagonalize Hermitian a (row-major n*n, destroyed); eigenvalues in w.

    When requested, v receives the eigenvector matrix (column k pairs with
    w[k]).  Eigenvalues are sorted descending.
    """
    cdef int p, q, k, i, sweep, best
    cdef double frob2 = 0.0, off2, r, tau, t, c, s, app, aqq, tmp
    cdef double complex apq, u, cu, ap, aq

    if want_vectors:
        for p in range(n):
            for q in range(n):
                v[p * n + q] = 1.0 if p == q else 0.0
    for p in range(n):
        for q in range(n):
            frob2 += (a[p * n + q].real * a[p * n + q].real
                      + a[p * n + q].imag * a[p * n + q].imag)
    if frob2 == 0.0:
        for p in range(n):
            w[p] = 0.0
        return

    for sweep in range(JACOBI_MAX_SWEEPS):
        off2 = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p * n + q]
                off2 += 2.0 * (apq.real * apq.real + apq.imag * apq.imag)
        if off2 <= JACOBI_RTOL * JACOBI_RTOL * frob2:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p * n + q]
                r = sqrt(apq.real * apq.real + apq.imag * apq.imag)
                if r * r <= 1e-300:
                    continue
                u = apq / r
                app = a[p * n + p].real
                aqq = a[q * n + q].real
                tau = (aqq - app) / (2.0 * r)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = -1.0 / (fabs(tau) + sqrt(1.0 + tau * tau))
                    if tau < 0.0:
                        t = -t
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                cu = u.conjugate()
                # columns p, q:  A <- A R  with R = [[c, -s], [cu*s, cu*c]]
                for k in range(n):
                    ap = a[k * n + p]
                    aq = a[k * n + q]
                    a[k * n + p] = c * ap + cu * s * aq
                    a[k * n + q] = -s * ap + cu * c * aq
                # rows p, q:  A <- R^dagger A
                for k in range(n):
                    ap = a[p * n + k]
                    aq = a[q * n + k]
                    a[p * n + k] = c * ap + u * s * aq
                    a[q * n + k] = -s * ap + u * c * aq
                a[p * n + q] = 0.0
                a[q * n + p] = 0.0
                if want_vectors:
                    for k in range(n):
                        ap = v[k * n + p]
                        aq = v[k * n + q]
                        v[k * n + p] = c * ap + cu * s * aq
                        v[k * n + q] = -s * ap + cu * c * aq

    for p in range(n):
        w[p] = a[p * n + p].real
    # selection sort, descending, carrying eigenvector columns along
    for p in range(n - 1):
        best = p
        for q in range(p + 1, n):
            if w[q] > w[best]:
                best = q
        if best != p:
            tmp = w[p]
            w[p] = w[best]
            w[best] = tmp
            if want_vectors:
                for k in range(n):
                    ap = v[k * n + p]
                    v[k * n + p] = v[k * n + best]
                    v[k * n + best] = ap


cdef inline void _unit2(const double* z, double complex* u) noexcept nogil:
    cdef double complex u0 = z[0] + 1j * z[1]
    cdef double complex u1 = z[2] + 1j * z[3]
    cdef double norm = sqrt(u0.real * u0.real + u0.imag * u0.imag
                            + u1.real * u1.real + u1.imag * u1.imag)
    u[0] = u0 / norm
    u[1] = u1 / norm


def orbit_sum_2x2(double a1, double a2, double b1, double b2,
                  double[:, ::1] z):
    cdef Py_ssize_t n_draws = z.shape[0], i
    cdef double alpha = a1 - a2, beta = b1 - b2
    cdef double c00, c11, diff
    cdef double complex u[2]
    cdef double complex v[2]
    cdef double complex c01
    gaps = np.empty(n_draws, dtype=np.float64)
    firsts = np.empty(n_draws, dtype=np.float64)
    cdef double[::1] gv = gaps
    cdef double[::1] fv = firsts
    with nogil:
        for i in range(n_draws):
            _unit2(&z[i, 0], u)
            _unit2(&z[i, 4], v)
            c00 = a2 + b2 + alpha * (u[0].real * u[0].real + u[0].imag * u[0].imag) \
                + beta * (v[0].real * v[0].real + v[0].imag * v[0].imag)
            c11 = a2 + b2 + alpha * (u[1].real * u[1].real + u[1].imag * u[1].imag) \
                + beta * (v[1].real * v[1].real + v[1].imag * v[1].imag)
            c01 = alpha * u[0] * u[1].conjugate() + beta * v[0] * v[1].conjugate()
            diff = c00 - c11
            gv[i] = sqrt(diff * diff
                         + 4.0 * (c01.real * c01.real + c01.imag * c01.imag))
            fv[i] = c00
    return gaps, firsts


def mixture_2x2(double mu, double nu, double[:, ::1] z):
    cdef Py_ssize_t n_draws = z.shape[0], i
    cdef double wu = 1.0 - 2.0 * mu, wv = 1.0 - 2.0 * nu
    cdef double r00, gap
    cdef double complex u[2]
    cdef double complex v[2]
    cdef double complex r01
    lam = np.empty(n_draws, dtype=np.float64)
    xs = np.empty(n_draws, dtype=np.float64)
    cdef double[::1] lv = lam
    cdef double[::1] xv = xs
    with nogil:
        for i in range(n_draws):
            _unit2(&z[i, 0], u)
            _unit2(&z[i, 4], v)
            r00 = 0.5 * (mu + wu * (u[0].real * u[0].real + u[0].imag * u[0].imag)) \
                + 0.5 * (nu + wv * (v[0].real * v[0].real + v[0].imag * v[0].imag))
            r01 = 0.5 * wu * u[0] * u[1].conjugate() + 0.5 * wv * v[0] * v[1].conjugate()
            xv[i] = 1.0 - r00
            gap = sqrt((2.0 * r00 - 1.0) * (2.0 * r00 - 1.0)
                       + 4.0 * (r01.real * r01.real + r01.imag * r01.imag))
            lv[i] = 0.5 * (1.0 - gap)
    return lam, xs


cdef void _gue_accumulate(int n, const double* z, double complex* h) noexcept nogil:
    """Add one GUE(n) matrix built from an n*n normal block to h."""
    cdef int i, j, col
    cdef double inv_sqrt2 = 1.0 / sqrt(2.0)
    for i in range(n):
        h[i * n + i] += z[i] * inv_sqrt2
    col = n
    for i in range(n):
        for j in range(i + 1, n):
            h[i * n + j] += 0.5 * z[col] + 0.5j * z[col + 1]
            h[j * n + i] += 0.5 * z[col] - 0.5j * z[col + 1]
            col += 2


def gue_sum_eigs(int n, int K, double[:, ::1] z):
    if n > MAXN:
        raise ValueError(f"compiled kernel supports n <= {MAXN}")
    cdef Py_ssize_t n_draws = z.shape[0], i
    cdef int k, j
    cdef int width = n * n
    cdef double complex h[MAXN * MAXN]
    cdef double w[MAXN]
    out = np.empty((n_draws, n), dtype=np.float64)
    cdef double[:, ::1] ov = out
    with nogil:
        for i in range(n_draws):
            for j in range(width):
                h[j] = 0.0
            for k in range(K):
                _gue_accumulate(n, &z[i, k * width], h)
            _jacobi(h, w, NULL, n, False)
            for j in range(n):
                ov[i, j] = w[j]
    return out


def wishart_sum_eigs(int m, int n, int K, double[:, ::1] z):
    if m > MAXN:
        raise ValueError(f"compiled kernel supports m <= {MAXN}")
    cdef Py_ssize_t n_draws = z.shape[0], d
    cdef int k, i, j, l
    cdef int width = 2 * m * n
    cdef double complex wmat[MAXN * MAXN]
    cdef double complex gij, gkj
    cdef double w[MAXN]
    cdef double inv_sqrt2 = 1.0 / sqrt(2.0)
    cdef const double* re
    cdef const double* im
    out = np.empty((n_draws, m), dtype=np.float64)
    cdef double[:, ::1] ov = out
    with nogil:
        for d in range(n_draws):
            for j in range(m * m):
                wmat[j] = 0.0
            for k in range(K):
                re = &z[d, k * width]
                im = re + m * n
                for i in range(m):
                    for l in range(i, m):
                        gij = 0.0
                        for j in range(n):
                            gij += ((re[i * n + j] + 1j * im[i * n + j])
                                    * (re[l * n + j] - 1j * im[l * n + j])) * 0.5
                        wmat[i * m + l] += gij
                        if l != i:
                            wmat[l * m + i] += gij.conjugate()
            _jacobi(wmat, w, NULL, m, False)
            for j in range(m):
                ov[d, j] = w[j]
    return out


def gt_traces(int n, double t, double[:, ::1] z):
    if n > MAXN:
        raise ValueError(f"compiled kernel supports n <= {MAXN}")
    cdef Py_ssize_t n_draws = z.shape[0], d
    cdef int i, j, k
    cdef int width = n * n
    cdef double complex x[MAXN * MAXN]
    cdef double complex y[MAXN * MAXN]
    cdef double complex s[MAXN * MAXN]
    cdef double complex vx[MAXN * MAXN]
    cdef double complex vy[MAXN * MAXN]
    cdef double complex ov
    cdef double wx[MAXN]
    cdef double wy[MAXN]
    cdef double ws[MAXN]
    cdef double ex[MAXN]
    cdef double prod, tot
    tr_prod = np.empty(n_draws, dtype=np.float64)
    tr_sum = np.empty(n_draws, dtype=np.float64)
    cdef double[::1] pv = tr_prod
    cdef double[::1] sv = tr_sum
    with nogil:
        for d in range(n_draws):
            for j in range(width):
                x[j] = 0.0
                y[j] = 0.0
            _gue_accumulate(n, &z[d, 0], x)
            _gue_accumulate(n, &z[d, width], y)
            for j in range(width):
                s[j] = x[j] + y[j]
            _jacobi(x, wx, vx, n, True)
            _jacobi(y, wy, vy, n, True)
            for i in range(n):
                ex[i] = exp(t * wx[i])
            prod = 0.0
            for i in range(n):
                for j in range(n):
                    # overlap <u_i, v_j> = sum_k conj(vx[k,i]) vy[k,j]
                    ov = 0.0
                    for k in range(n):
                        ov += vx[k * n + i].conjugate() * vy[k * n + j]
                    prod += ex[i] * exp(t * wy[j]) * (ov.real * ov.real + ov.imag * ov.imag)
            tot = 0.0
            _jacobi(s, ws, NULL, n, False)
            for i in range(n):
                tot += exp(t * ws[i])
            pv[d] = prod
            sv[d] = tot
    return tr_prod, tr_sum
