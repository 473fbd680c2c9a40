# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot kernels (see ``_kernels_py`` for the reference)."""
import numpy as np

from libc.math cimport exp, log, fabs, sqrt, hypot
from scipy.linalg.cython_lapack cimport dpotrf, dpotrs

cdef double BIG = 1e64
cdef double EPS = 2.220446049250313e-16


cdef inline double cabs_(double complex z) nogil:
    return hypot(z.real, z.imag)


cdef inline double cnorm1(double complex z) nogil:
    """|re| + |im|, within a factor sqrt(2) of the modulus and much cheaper."""
    return fabs(z.real) + fabs(z.imag)


cdef void _eval_real(double x, const double[::1] lc, const double[::1] sc,
                     const double[::1] A, const double[::1] B, double* out) nogil:
    cdef Py_ssize_t k = lc.shape[0] - 1, n
    cdef double Pm = 0.0, Pc = 1.0, Dm = 0.0, Dc = 0.0, Em = 0.0, Ec = 0.0
    cdef double Pn, Dn, En, xb, mag, t, e, w
    cdef double sp = 0.0, sa = lc[0], Lc = 1.0
    cdef double acc = 0.0, d1 = 0.0, d2 = 0.0, ab = 0.0
    for n in range(k + 1):
        if n > 0:
            xb = x - B[n - 1]
            Lc = fabs(xb * Pc) + A[n - 1] * fabs(Pm)
            Pn = xb * Pc - A[n - 1] * Pm
            Dn = Pc + xb * Dc - A[n - 1] * Dm
            En = 2.0 * Dc + xb * Ec - A[n - 1] * Em
            Pm = Pc; Pc = Pn; Dm = Dc; Dc = Dn; Em = Ec; Ec = En
            mag = fabs(Pc)
            if fabs(Dc) > mag:
                mag = fabs(Dc)
            if fabs(Ec) > mag:
                mag = fabs(Ec)
            if mag > BIG or (mag < 1.0 / BIG and mag > 0):
                Pm /= mag; Pc /= mag; Dm /= mag; Dc /= mag; Em /= mag; Ec /= mag; Lc /= mag
                sp += log(mag)
        t = lc[n] + sp - sa
        if t > 0:
            e = exp(-t)
            acc *= e; d1 *= e; d2 *= e; ab *= e
            sa += t
            t = 0.0
        w = exp(t)
        acc += sc[n] * w * Pc
        d1 += sc[n] * w * Dc
        d2 += sc[n] * w * Ec
        ab += w * Lc
    out[0] = sa; out[1] = acc; out[2] = d1; out[3] = d2; out[4] = ab


def jacobi_values(x, lc, sc, A, B):
    cdef double[::1] xv = np.ascontiguousarray(np.atleast_1d(x), dtype=float)
    cdef const double[::1] l = np.ascontiguousarray(lc, dtype=float)
    cdef const double[::1] s = np.ascontiguousarray(sc, dtype=float)
    cdef const double[::1] a = np.ascontiguousarray(A, dtype=float)
    cdef const double[::1] b = np.ascontiguousarray(B, dtype=float)
    cdef Py_ssize_t m = xv.shape[0], i
    res = np.empty((5, m))
    cdef double[:, ::1] r = res
    cdef double out[5]
    for i in range(m):
        _eval_real(xv[i], l, s, a, b, out)
        r[0, i] = out[0]; r[1, i] = out[1]; r[2, i] = out[2]; r[3, i] = out[3]; r[4, i] = out[4]
    return res[0], res[1], res[2], res[3], res[4]


cdef void _ratio(double complex z, const double[::1] lc, const double[::1] sc,
                 const double[::1] A, const double[::1] B,
                 double complex* N, double* noise) nogil:
    cdef Py_ssize_t k = lc.shape[0] - 1, n
    cdef double complex Pm = 0.0, Pc = 1.0, Dm = 0.0, Dc = 0.0, Pn, Dn, xb
    cdef double complex acc = 0.0, dacc = 0.0
    cdef double sp = 0.0, sa = lc[0], ab = 0.0, mag, m2, t, e, w, Lc = 1.0
    for n in range(k + 1):
        if n > 0:
            xb = z - B[n - 1]
            Lc = cnorm1(xb * Pc) + A[n - 1] * cnorm1(Pm)
            Pn = xb * Pc - A[n - 1] * Pm
            Dn = Pc + xb * Dc - A[n - 1] * Dm
            Pm = Pc; Pc = Pn; Dm = Dc; Dc = Dn
            mag = cnorm1(Pc)
            m2 = cnorm1(Dc)
            if m2 > mag:
                mag = m2
            if mag > BIG or (mag < 1.0 / BIG and mag > 0):
                Pm = Pm / mag; Pc = Pc / mag; Dm = Dm / mag; Dc = Dc / mag; Lc /= mag
                sp += log(mag)
        t = lc[n] + sp - sa
        if t > 0:
            e = exp(-t)
            acc = acc * e; dacc = dacc * e; ab *= e
            sa += t
            t = 0.0
        w = exp(t)
        acc = acc + sc[n] * w * Pc
        dacc = dacc + sc[n] * w * Dc
        ab += w * Lc
    N[0] = acc / dacc
    noise[0] = ab / cabs_(dacc)


def aberth_jacobi(z0, lc, sc, A, B, int maxit, double floor):
    z_arr = np.array(z0, dtype=complex)
    cdef double complex[::1] z = z_arr
    cdef const double[::1] l = np.ascontiguousarray(lc, dtype=float)
    cdef const double[::1] s = np.ascontiguousarray(sc, dtype=float)
    cdef const double[::1] a = np.ascontiguousarray(A, dtype=float)
    cdef const double[::1] b = np.ascontiguousarray(B, dtype=float)
    cdef Py_ssize_t k = z.shape[0], i, j
    conv_arr = np.zeros(k, dtype=np.uint8)
    cdef unsigned char[::1] conv = conv_arr
    cdef int it, its = 0, nconv
    cdef double complex N, S, w
    cdef double noise
    with nogil:
        for it in range(maxit):
            nconv = 0
            for i in range(k):
                if conv[i]:
                    nconv += 1
            if nconv == k:
                break
            its = it + 1
            for i in range(k):
                if conv[i]:
                    continue
                _ratio(z[i], l, s, a, b, &N, &noise)
                S = 0.0
                for j in range(k):
                    if j != i:
                        S = S + 1.0 / (z[i] - z[j])
                w = N / (1.0 - N * S)
                if not (cabs_(w) < 1e308):
                    conv[i] = 1
                    continue
                z[i] = z[i] - w
                if cabs_(w) <= 4 * EPS * cabs_(z[i]) or cabs_(N) <= floor * noise:
                    conv[i] = 1
    return z_arr, its, conv_arr.astype(bool)


def twisted_log_vector(d_, sup_, sub_, double f):
    cdef const double[::1] d = np.ascontiguousarray(d_, dtype=float)
    cdef const double[::1] sup = np.ascontiguousarray(sup_, dtype=float)
    cdef const double[::1] sub = np.ascontiguousarray(sub_, dtype=float)
    cdef Py_ssize_t n = d.shape[0], j, p = 0
    lv_arr = np.zeros(n)
    sg_arr = np.ones(n)
    if n == 1:
        return lv_arr, sg_arr
    cdef double[::1] lv = lv_arr, sg = sg_arr
    rho_arr = np.zeros(n)
    sig_arr = np.zeros(n)
    cdef double[::1] rho = rho_arr, sig = sig_arr
    cdef double tiny = EPS * (np.max(np.abs(d_)) + np.max(np.abs(sup_)) + np.max(np.abs(sub_)) + fabs(f)) + 1e-300
    cdef double r, v, best = 1e308
    with nogil:
        r = (f - d[0]) / sup[0]
        rho[0] = r if r != 0 else tiny
        for j in range(1, n - 1):
            r = (f - d[j] - sub[j - 1] / rho[j - 1]) / sup[j]
            rho[j] = r if r != 0 else tiny
        r = (f - d[n - 1]) / sub[n - 2]
        sig[n - 1] = r if r != 0 else tiny
        for j in range(n - 2, 0, -1):
            r = (f - d[j] - sup[j] / sig[j + 1]) / sub[j - 1]
            sig[j] = r if r != 0 else tiny
        for j in range(n):
            v = d[j] - f
            if j > 0:
                v += sub[j - 1] / rho[j - 1]
            if j < n - 1:
                v += sup[j] / sig[j + 1]
            if fabs(v) < best:
                best = fabs(v)
                p = j
        for j in range(p, 0, -1):
            lv[j - 1] = lv[j] - log(fabs(rho[j - 1]))
            sg[j - 1] = sg[j] * (1.0 if rho[j - 1] > 0 else -1.0)
        for j in range(p, n - 1):
            lv[j + 1] = lv[j] - log(fabs(sig[j + 1]))
            sg[j + 1] = sg[j] * (1.0 if sig[j + 1] > 0 else -1.0)
    lv_arr -= lv_arr[n - 1]
    sg_arr *= sg_arr[n - 1]
    return lv_arr, sg_arr


cdef double _residual(double[::1] x, double alpha, double beta, double gamma,
                      double[::1] r, double* relmax, double* snorm) nogil:
    """Fill r with the Bethe residual; return its 2-norm.

    Also stores max_i |r_i| / scale_i and the 2-norm of r_i / scale_i.
    """
    cdef Py_ssize_t k = x.shape[0], i, j
    cdef double acc, sc, q, nrm = 0.0, rel = 0.0, snrm = 0.0
    for i in range(k):
        acc = alpha / (x[i] - 1.0) + beta / (x[i] + 1.0) + gamma
        sc = fabs(alpha / (x[i] - 1.0)) + fabs(beta / (x[i] + 1.0)) + gamma
        for j in range(k):
            if j != i:
                q = 2.0 / (x[i] - x[j])
                acc += q
                sc += fabs(q)
        r[i] = acc
        nrm += acc * acc
        snrm += (acc / sc) * (acc / sc)
        if fabs(acc) / sc > rel:
            rel = fabs(acc) / sc
    relmax[0] = rel
    snorm[0] = sqrt(snrm)
    return sqrt(nrm)


cdef double _max_step(double[::1] x, double[::1] dx, Py_ssize_t k1) nogil:
    cdef Py_ssize_t k = x.shape[0], i
    cdef double s = 1e308, dg
    for i in range(k - 1):
        dg = dx[i + 1] - dx[i]
        if dg < 0:
            if -(x[i + 1] - x[i]) / dg < s:
                s = -(x[i + 1] - x[i]) / dg
    if k1 > 0 and dx[k1 - 1] > 0:
        if (-1.0 - x[k1 - 1]) / dx[k1 - 1] < s:
            s = (-1.0 - x[k1 - 1]) / dx[k1 - 1]
    if k1 < k:
        if dx[k1] < 0 and (x[k1] + 1.0) / -dx[k1] < s:
            s = (x[k1] + 1.0) / -dx[k1]
        if dx[k - 1] > 0 and (1.0 - x[k - 1]) / dx[k - 1] < s:
            s = (1.0 - x[k - 1]) / dx[k - 1]
    return s


def bae_newton(x0, Py_ssize_t k1, double alpha, double beta, double gamma, double tol, int maxit):
    x_arr = np.array(x0, dtype=float)
    cdef double[::1] x = x_arr
    cdef Py_ssize_t k = x.shape[0], i, j
    H_arr = np.empty((k, k))
    cdef double[:, ::1] H = H_arr
    cdef double[::1] r = np.empty(k), rn = np.empty(k), dx = np.empty(k), xn = np.empty(k)
    cdef double rel, reln, nr, nn, sr, srn, s, q, diag
    cdef int its = 0, it, info = 0, nrhs = 1, kk = <int>k
    cdef char uplo = b'L'
    cdef bint moved, small
    with nogil:
        nr = _residual(x, alpha, beta, gamma, r, &rel, &sr)
        for it in range(1, maxit + 1):
            if rel <= tol:
                break
            its = it
            for i in range(k):
                diag = alpha / ((x[i] - 1.0) * (x[i] - 1.0)) + beta / ((x[i] + 1.0) * (x[i] + 1.0))
                for j in range(k):
                    if j != i:
                        q = 1.0 / (x[i] - x[j])
                        q = 2.0 * q * q
                        H[i, j] = -q
                        diag += q
                H[i, i] = diag
                dx[i] = r[i]
            dpotrf(&uplo, &kk, &H[0, 0], &kk, &info)
            if info != 0:
                break
            dpotrs(&uplo, &kk, &nrhs, &H[0, 0], &kk, &dx[0], &kk, &info)
            s = 0.95 * _max_step(x, dx, k1)
            if s > 1.0:
                s = 1.0
            moved = False
            while s > 1e-12:
                for i in range(k):
                    xn[i] = x[i] + s * dx[i]
                nn = _residual(xn, alpha, beta, gamma, rn, &reln, &srn)
                # the scaled norm lets roots far out near -1/gamma, whose
                # absolute residuals are tiny, keep improving
                if nn <= (1.0 - 1e-4 * s) * nr or srn <= (1.0 - 1e-4 * s) * sr:
                    moved = True
                    break
                s *= 0.5
            if not moved:
                break
            small = True
            for i in range(k):
                if fabs(xn[i] - x[i]) > 4 * EPS * fabs(xn[i]):
                    small = False
                x[i] = xn[i]
                r[i] = rn[i]
            nr = nn
            sr = srn
            rel = reln
            if small:
                break
    return x_arr, its, rel


def tql_eigenvalues(d_, e_, int maxit=60):
    d_arr = np.array(d_, dtype=float)
    cdef double[::1] d = d_arr
    cdef Py_ssize_t n = d.shape[0], l, m, i
    ee_arr = np.zeros(n)
    if n > 1:
        ee_arr[:n - 1] = e_
    cdef double[::1] ee = ee_arr
    cdef double dd, g, r, s, c, p, f, b
    cdef int it
    cdef bint underflow, ok = True
    with nogil:
        for l in range(n):
            it = 0
            while True:
                m = l
                while m < n - 1:
                    dd = fabs(d[m]) + fabs(d[m + 1])
                    if fabs(ee[m]) <= EPS * dd:
                        break
                    m += 1
                if m == l:
                    break
                it += 1
                if it > maxit:
                    ok = False
                    break
                g = (d[l + 1] - d[l]) / (2.0 * ee[l])
                r = hypot(g, 1.0)
                g = d[m] - d[l] + ee[l] / (g + (r if g >= 0 else -r))
                s = 1.0
                c = 1.0
                p = 0.0
                i = m - 1
                underflow = False
                while i >= l:
                    f = s * ee[i]
                    b = c * ee[i]
                    r = hypot(f, g)
                    ee[i + 1] = r
                    if r == 0.0:
                        d[i + 1] -= p
                        ee[m] = 0.0
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
                ee[l] = g
                ee[m] = 0.0
            if not ok:
                break
    d_arr.sort()
    return d_arr, bool(ok)
