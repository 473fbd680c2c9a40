"""Electrostatic picture of the Bethe equations.

k unit charges move on the real line in the field of a charge alpha/2 at +1,
beta/2 at -1 and a uniform field gamma/2. Their energy

    W(x) = -(gamma/2) sum x_i - (alpha/2) sum ln|x_i - 1| - (beta/2) sum ln|x_i + 1|
           - sum_{i<j} ln|x_i - x_j|

is stationary exactly where the Bethe equations hold. For gamma > 0 every
ordered configuration with k1 charges in (-inf, -1) and k2 in (-1, 1) has a
unique minimum, since W is strictly convex on that (convex) chamber.
"""
from dataclasses import dataclass

import numpy as np

from .errors import EscapedInterval, NoConvergence, ParamOutOfRange, SingularConfiguration
from .model import SpectralParams
from .tolerances import DEFAULT


@dataclass(frozen=True, eq=False)
class ElectroConfig:
    k1: int
    k2: int
    positions: np.ndarray
    grad_norm: float
    hessian_pd: bool
    iterations: int = 0

    @property
    def occupation(self):
        return self.k1, self.k2


def _check(x):
    x = np.asarray(x, dtype=float).reshape(-1)
    if np.any(x == 1.0) or np.any(x == -1.0):
        raise SingularConfiguration("a charge sits on a fixed pole")
    if x.size > 1 and np.unique(x).size != x.size:
        raise SingularConfiguration("two charges coincide")
    return x


def electro_energy(positions, s: SpectralParams):
    x = _check(positions)
    D = np.abs(x[:, None] - x[None, :])
    iu = np.triu_indices(x.size, 1)
    return float(-0.5 * s.gamma * x.sum()
                 - 0.5 * s.alpha * np.log(np.abs(x - 1)).sum()
                 - 0.5 * s.beta * np.log(np.abs(x + 1)).sum()
                 - np.log(D[iu]).sum())


def electro_gradient(positions, s: SpectralParams):
    x = _check(positions)
    D = x[:, None] - x[None, :]
    np.fill_diagonal(D, np.inf)
    return -0.5 * s.gamma - 0.5 * s.alpha / (x - 1) - 0.5 * s.beta / (x + 1) - (1.0 / D).sum(axis=1)


def electro_hessian(positions, s: SpectralParams):
    x = _check(positions)
    D = x[:, None] - x[None, :]
    np.fill_diagonal(D, np.inf)
    inv2 = 1.0 / D ** 2
    H = -inv2
    H[np.diag_indices_from(H)] = 0.5 * s.alpha / (x - 1) ** 2 + 0.5 * s.beta / (x + 1) ** 2 + inv2.sum(axis=1)
    return H


def enumerate_configs(k):
    """[(k, 0), (k-1, 1), ..., (0, k)]."""
    if int(k) != k or k < 0:
        raise ParamOutOfRange(f"k must be a nonnegative integer, got {k}")
    return [(k - j, j) for j in range(int(k) + 1)]


def default_seed(k1, k2):
    """Outer charges at -1-j, inner ones at Chebyshev points of (-1, 1)."""
    out = -1.0 - np.arange(k1, 0, -1, dtype=float)
    inner = np.cos(np.pi * (np.arange(k2, 0, -1) - 0.5) / k2) if k2 else np.zeros(0)
    return np.concatenate([out, inner])


def _in_chamber(x, k1):
    return (np.all(np.diff(x) > 0) and (k1 == 0 or x[k1 - 1] < -1)
            and (k1 == x.size or (x[k1] > -1 and x[-1] < 1)))


def _max_step(x, dx, k1):
    """Largest tau <= 1 keeping x + tau dx ordered and inside its intervals."""
    gaps = list(np.diff(x))
    rates = list(np.diff(dx))
    k = x.size
    if k1:
        gaps.append(-1 - x[k1 - 1])
        rates.append(-dx[k1 - 1])
    if k1 < k:
        gaps += [x[k1] + 1, 1 - x[-1]]
        rates += [dx[k1], -dx[-1]]
    gaps, rates = np.array(gaps), np.array(rates)
    shrink = rates < 0
    if not np.any(shrink):
        return 1.0
    return min(1.0, 0.95 * float(np.min(-gaps[shrink] / rates[shrink])))


def _is_pd(H):
    try:
        np.linalg.cholesky(H)
        return True
    except np.linalg.LinAlgError:
        return False


def gradient_floor(x, s: SpectralParams):
    """Gradient that rounding the positions to double precision alone can cause.

    First-order bound (eps/2) sum_j |H_ij| |x_j|; it grows near the poles and
    in tight clusters, where an absolute tolerance alone cannot be met.
    """
    H = np.abs(electro_hessian(x, s))
    return 0.5 * np.finfo(float).eps * (H @ np.abs(np.asarray(x, dtype=float)))


def _converged(x, g, s, tol):
    return bool(np.all(np.abs(g) < tol + gradient_floor(x, s)))


def _newton(x, k1, s, tol, maxit, escape):
    """Damped Newton with a fraction-to-boundary rule and energy backtracking."""
    W = electro_energy(x, s)
    for it in range(1, maxit + 1):
        g = electro_gradient(x, s)
        H = electro_hessian(x, s)
        dx = -np.linalg.solve(H, g)
        # far charges feel weak forces: a small gradient alone does not pin
        # them, so also require the Newton correction to be at rounding level
        if _converged(x, g, s, tol) and np.max(np.abs(dx) / (1 + np.abs(x))) < 1e-13:
            return x, it - 1
        tau = _max_step(x, dx, k1)
        while True:
            xn = x + tau * dx
            if np.min(xn) < -escape:
                raise EscapedInterval(f"a charge ran past {-escape:.1e}; no equilibrium in chamber ({k1}, {x.size - k1})")
            Wn = electro_energy(xn, s) if _in_chamber(xn, k1) else np.inf
            # the energy is strictly convex, so Newton steps of length one are
            # accepted near the minimum; the relative slack absorbs rounding
            if Wn <= W + 1e-4 * tau * g @ dx + 1e-14 * max(1.0, abs(W)):
                break
            tau *= 0.5
            if tau < 1e-14:
                return x, it
        x, W = xn, Wn
    return x, maxit


def find_equilibrium(cfg, s: SpectralParams, tol=DEFAULT, seed=None, rng=None, escape=1e12) -> ElectroConfig:
    """Stationary point of the energy with the given interval occupation.

    Converged means every gradient component is below ``electro_tol`` plus
    the rounding floor of :func:`gradient_floor`. Starts from ``seed`` (default :func:`default_seed`) and retries up to
    five times from perturbed seeds when the iteration stalls.
    """
    k1, k2 = (int(v) for v in cfg)
    if k1 < 0 or k2 < 0 or k1 + k2 < 1:
        raise ParamOutOfRange(f"invalid configuration {cfg}")
    x0 = default_seed(k1, k2) if seed is None else np.sort(np.asarray(seed, dtype=float))
    if not _in_chamber(x0, k1):
        raise EscapedInterval(f"seed does not realise the configuration ({k1}, {k2})")
    rng = np.random.default_rng(0) if rng is None else rng
    best = None
    for attempt in range(6):
        x, its = _newton(x0.copy(), k1, s, tol.electro_tol, tol.max_iters, escape)
        g = electro_gradient(x, s)
        gn = float(np.max(np.abs(g)))
        ok = _converged(x, g, s, tol.electro_tol)
        if best is None or (ok, -gn) > (best[3], -best[1]):
            best = (x, gn, its, ok)
        if ok:
            break
        x0 = _perturb(default_seed(k1, k2), k1, rng)
    x, gn, its, ok = best
    if not ok:
        raise NoConvergence(f"configuration ({k1}, {k2}): gradient norm {gn:.3e} after retries")
    return ElectroConfig(k1, k2, x, gn, _is_pd(electro_hessian(x, s)), its)


def _perturb(x, k1, rng):
    """Random point of the chamber near x."""
    for _ in range(100):
        y = np.sort(x + 0.3 * rng.standard_normal(x.size) * np.maximum(1.0, np.abs(x + 1)) * (x < -1)
                    + 0.1 * rng.standard_normal(x.size) * (x > -1))
        if _in_chamber(y, k1):
            return y
    return x


def random_chamber_point(k1, k2, rng, spread=20.0):
    """A uniformly scattered starting point with k1 charges below -1, k2 in (-1, 1)."""
    out = np.sort(-1.0 - spread * rng.random(k1))
    inner = np.sort(rng.uniform(-1, 1, k2))
    return np.concatenate([out, inner])


def all_equilibria(k, s: SpectralParams, tol=DEFAULT):
    """One equilibrium per configuration, in the order of :func:`enumerate_configs`."""
    if k == 0:
        return [ElectroConfig(0, 0, np.zeros(0), 0.0, True, 0)]
    return [find_equilibrium(c, s, tol) for c in enumerate_configs(k)]


def hausdorff(a, b):
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    if a.size == 0 and b.size == 0:
        return 0.0
    if a.size == 0 or b.size == 0:
        return float("inf")
    D = np.abs(a[:, None] - b[None, :])
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


def match_to_roots(equilibria, root_sets):
    """Pair each equilibrium with the root set of the same occupation.

    Returns a list of (equilibrium, index into root_sets, Hausdorff distance);
    the index is None when no root set has that occupation.
    """
    from .polyroots import occupation

    by_occ = {}
    for i, r in enumerate(root_sets):
        by_occ.setdefault(occupation(r), []).append(i)
    out = []
    for eq in equilibria:
        idx = by_occ.get(eq.occupation, [])
        if not idx:
            out.append((eq, None, float("inf")))
            continue
        d = [hausdorff(eq.positions, root_sets[i]) for i in idx]
        j = int(np.argmin(d))
        out.append((eq, idx[j], d[j]))
    return out


def restart_spread(cfg, s: SpectralParams, n=10, rng=None, tol=DEFAULT):
    """Largest distance between minima reached from n random starts in one chamber."""
    rng = np.random.default_rng(1) if rng is None else rng
    ref = find_equilibrium(cfg, s, tol).positions
    worst = 0.0
    for _ in range(n):
        x0 = random_chamber_point(cfg[0], cfg[1], rng)
        eq = find_equilibrium(cfg, s, tol, seed=x0, rng=rng)
        worst = max(worst, hausdorff(eq.positions, ref))
    return worst
