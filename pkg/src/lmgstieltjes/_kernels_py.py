"""Pure-Python/numpy versions of the hot kernels.

Same signatures and return conventions as the compiled ``_kernels`` module;
used when the extension is not built or when ``LMGSTIELTJES_PURE_PYTHON``
is set. Polynomials are given in the monic Jacobi basis pi_n as
``p = sum_n sc[n] * exp(lc[n]) * pi_n`` so that coefficients spanning
thousands of orders of magnitude stay representable.
"""
import numpy as np
import scipy.linalg as sla

_BIG = 1e64
_EPS = np.finfo(float).eps


def jacobi_values(x, lc, sc, A, B):
    """Value and first two derivatives of a Jacobi-basis polynomial.

    Returns ``(logscale, y, y1, y2, yabs)``; the true values are the arrays
    times ``exp(logscale)``. ``yabs`` is sum_n |c_n| L_n(x) with
    L_n = |x - B_{n-1}||pi_{n-1}| + A_{n-1}|pi_{n-2}| (L_0 = 1), the scale
    against which rounding in ``y`` is measured. L_n >= |pi_n| and stays
    away from zero where pi_n itself vanishes.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    k = len(lc) - 1
    zero = np.zeros_like(x)
    Pm, Pc = zero.copy(), np.ones_like(x)
    Dm, Dc = zero.copy(), zero.copy()
    Em, Ec = zero.copy(), zero.copy()
    sp = zero.copy()
    sa = np.full_like(x, lc[0])
    Lc = np.ones_like(x)
    acc, d1, d2, ab = zero.copy(), zero.copy(), zero.copy(), zero.copy()
    for n in range(k + 1):
        if n > 0:
            xb = x - B[n - 1]
            Lc = np.abs(xb * Pc) + A[n - 1] * np.abs(Pm)
            Pn = xb * Pc - A[n - 1] * Pm
            Dn = Pc + xb * Dc - A[n - 1] * Dm
            En = 2.0 * Dc + xb * Ec - A[n - 1] * Em
            Pm, Pc, Dm, Dc, Em, Ec = Pc, Pn, Dc, Dn, Ec, En
            mag = np.maximum(np.maximum(np.abs(Pc), np.abs(Dc)), np.abs(Ec))
            r = (mag > _BIG) | ((mag < 1.0 / _BIG) & (mag > 0))
            if r.any():
                m = np.where(r, mag, 1.0)
                Pm, Pc, Dm, Dc, Em, Ec = Pm / m, Pc / m, Dm / m, Dc / m, Em / m, Ec / m
                Lc = Lc / m
                sp = sp + np.log(m)
        t = lc[n] + sp - sa
        up = t > 0
        if up.any():
            e = np.exp(-np.where(up, t, 0.0))
            acc, d1, d2, ab = acc * e, d1 * e, d2 * e, ab * e
            sa = np.where(up, sa + t, sa)
            t = np.where(up, 0.0, t)
        w = np.exp(t)
        acc += sc[n] * w * Pc
        d1 += sc[n] * w * Dc
        d2 += sc[n] * w * Ec
        ab += w * Lc
    return sa, acc, d1, d2, ab


def _newton_ratio(z, lc, sc, A, B):
    """p/p' and sum|c||pi|/|p'| at complex points z."""
    k = len(lc) - 1
    Pm, Pc = np.zeros_like(z), np.ones_like(z)
    Dm, Dc = np.zeros_like(z), np.zeros_like(z)
    sp = np.zeros(z.shape)
    sa = np.full(z.shape, lc[0])
    acc, dacc = np.zeros_like(z), np.zeros_like(z)
    ab = np.zeros(z.shape)
    Lc = np.ones(z.shape)
    for n in range(k + 1):
        if n > 0:
            xb = z - B[n - 1]
            Lc = np.abs(xb * Pc) + A[n - 1] * np.abs(Pm)
            Pn = xb * Pc - A[n - 1] * Pm
            Dn = Pc + xb * Dc - A[n - 1] * Dm
            Pm, Pc, Dm, Dc = Pc, Pn, Dc, Dn
            mag = np.maximum(np.abs(Pc), np.abs(Dc))
            r = (mag > _BIG) | ((mag < 1.0 / _BIG) & (mag > 0))
            if r.any():
                m = np.where(r, mag, 1.0)
                Pm, Pc, Dm, Dc = Pm / m, Pc / m, Dm / m, Dc / m
                Lc = Lc / m
                sp = sp + np.log(m)
        t = lc[n] + sp - sa
        up = t > 0
        if up.any():
            e = np.exp(-np.where(up, t, 0.0))
            acc, dacc, ab = acc * e, dacc * e, ab * e
            sa = np.where(up, sa + t, sa)
            t = np.where(up, 0.0, t)
        w = np.exp(t)
        acc += sc[n] * w * Pc
        dacc += sc[n] * w * Dc
        ab += w * Lc
    with np.errstate(divide="ignore", invalid="ignore"):
        return acc / dacc, ab / np.abs(dacc)


def aberth_jacobi(z0, lc, sc, A, B, maxit, floor):
    """Aberth-Ehrlich iteration for all zeros of a Jacobi-basis polynomial.

    A root is frozen once its correction is at rounding level relative to
    its modulus or once |p| <= floor * sum|c||pi| (it sits inside the
    pseudozero set and cannot be improved). Returns ``(z, iterations,
    converged)``.
    """
    z = np.array(z0, dtype=complex)
    k = z.size
    conv = np.zeros(k, dtype=bool)
    its = 0
    for its in range(1, maxit + 1):
        act = np.flatnonzero(~conv)
        if act.size == 0:
            its -= 1
            break
        N, noise = _newton_ratio(z[act], lc, sc, A, B)
        D = z[act, None] - z[None, :]
        D[np.arange(act.size), act] = np.inf
        S = (1.0 / D).sum(axis=1)
        w = N / (1.0 - N * S)
        bad = ~np.isfinite(w)
        w[bad] = 0.0
        z[act] -= w
        done = (np.abs(w) <= 4 * _EPS * np.abs(z[act])) | (np.abs(N) <= floor * noise) | bad
        conv[act[done]] = True
    return z, its, conv


def twisted_log_vector(d, sup, sub, f):
    """Null vector of T - f I for a tridiagonal T with positive off-diagonals.

    Ratios are propagated from both ends and joined at the index where the
    twisted pivot is smallest. Returns ``(log|v|, sign(v))`` normalised so
    the last entry is +1.
    """
    n = len(d)
    if n == 1:
        return np.zeros(1), np.ones(1)
    tiny = _EPS * (np.max(np.abs(d)) + np.max(np.abs(sup)) + np.max(np.abs(sub)) + abs(f)) + 1e-300
    rho = np.zeros(n)
    r = (f - d[0]) / sup[0]
    rho[0] = r if r != 0 else tiny
    for j in range(1, n - 1):
        r = (f - d[j] - sub[j - 1] / rho[j - 1]) / sup[j]
        rho[j] = r if r != 0 else tiny
    sig = np.zeros(n)
    r = (f - d[n - 1]) / sub[n - 2]
    sig[n - 1] = r if r != 0 else tiny
    for j in range(n - 2, 0, -1):
        r = (f - d[j] - sup[j] / sig[j + 1]) / sub[j - 1]
        sig[j] = r if r != 0 else tiny
    best, p = np.inf, 0
    for j in range(n):
        v = d[j] - f
        if j > 0:
            v += sub[j - 1] / rho[j - 1]
        if j < n - 1:
            v += sup[j] / sig[j + 1]
        if abs(v) < best:
            best, p = abs(v), j
    lv = np.zeros(n)
    sg = np.ones(n)
    for j in range(p, 0, -1):
        lv[j - 1] = lv[j] - np.log(abs(rho[j - 1]))
        sg[j - 1] = sg[j] * np.sign(rho[j - 1])
    for j in range(p, n - 1):
        lv[j + 1] = lv[j] - np.log(abs(sig[j + 1]))
        sg[j + 1] = sg[j] * np.sign(sig[j + 1])
    return lv - lv[n - 1], sg * sg[n - 1]


def _residual(x, alpha, beta, gamma):
    D = x[:, None] - x[None, :]
    np.fill_diagonal(D, np.inf)
    inv = 1.0 / D
    r = alpha / (x - 1.0) + beta / (x + 1.0) + gamma + 2.0 * inv.sum(axis=1)
    scale = alpha / np.abs(x - 1.0) + beta / np.abs(x + 1.0) + gamma + 2.0 * np.abs(inv).sum(axis=1)
    return r, scale, inv


def _max_step(x, dx, k1):
    s = np.inf
    dg = np.diff(dx)
    m = dg < 0
    if m.any():
        s = min(s, float(np.min(-np.diff(x)[m] / dg[m])))
    k = x.size
    if k1 > 0 and dx[k1 - 1] > 0:
        s = min(s, (-1.0 - x[k1 - 1]) / dx[k1 - 1])
    if k1 < k:
        if dx[k1] < 0:
            s = min(s, (x[k1] + 1.0) / -dx[k1])
        if dx[k - 1] > 0:
            s = min(s, (1.0 - x[k - 1]) / dx[k - 1])
    return s


def bae_newton(x0, k1, alpha, beta, gamma, tol, maxit):
    """Damped Newton for the Bethe equations inside one ordered chamber.

    The first ``k1`` unknowns stay below -1 and the rest inside (-1, 1); a
    fraction-to-boundary rule keeps the ordering. Returns ``(x, iterations,
    relres)`` where ``relres`` is max_i |r_i| / scale_i at exit.
    """
    x = np.array(x0, dtype=float)
    k = x.size
    r, scale, inv = _residual(x, alpha, beta, gamma)
    rel = float(np.max(np.abs(r) / scale))
    nr = np.linalg.norm(r)
    sr = np.linalg.norm(r / scale)
    its = 0
    for its in range(1, maxit + 1):
        if rel <= tol:
            its -= 1
            break
        inv2 = inv * inv
        H = -2.0 * inv2
        H[np.diag_indices(k)] = alpha / (x - 1.0) ** 2 + beta / (x + 1.0) ** 2 + 2.0 * inv2.sum(axis=1)
        dx = sla.cho_solve(sla.cho_factor(H, lower=True, check_finite=False), r, check_finite=False)
        s = min(1.0, 0.95 * _max_step(x, dx, k1))
        moved = False
        while s > 1e-12:
            xn = x + s * dx
            rn, sn, invn = _residual(xn, alpha, beta, gamma)
            nn = np.linalg.norm(rn)
            srn = np.linalg.norm(rn / sn)
            # the scaled norm lets roots far out near -1/gamma, whose
            # absolute residuals are tiny, keep improving
            if nn <= (1.0 - 1e-4 * s) * nr or srn <= (1.0 - 1e-4 * s) * sr:
                moved = True
                break
            s *= 0.5
        if not moved:
            break
        step = np.abs(xn - x)
        x, r, scale, inv, nr, sr = xn, rn, sn, invn, nn, srn
        rel = float(np.max(np.abs(r) / scale))
        if np.all(step <= 4 * _EPS * np.abs(x)):
            break
    return x, its, rel


def tql_eigenvalues(d, e, maxit=60):
    """Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL.

    ``e`` holds the off-diagonal (length n-1). Returns ``(ascending
    eigenvalues, ok)``; ``ok`` is False if some eigenvalue needed more than
    ``maxit`` sweeps.
    """
    d = np.array(d, dtype=float)
    n = d.size
    ee = np.zeros(n)
    ee[: n - 1] = e
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(ee[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > maxit:
                return np.sort(d), False
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + ee[l] / (g + (r if g >= 0 else -r))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * ee[i]
                b = c * ee[i]
                r = np.hypot(f, g)
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
    return np.sort(d), True
