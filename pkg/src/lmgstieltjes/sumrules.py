"""Closed-form identities linking the zeros x_i, the Van Vleck constant f and k.

Summing the Bethe equations, summing them against x_i, combining the two, and
expanding the differential equation around the origin give relations that
any correct state must satisfy. ``sum_rule_report`` evaluates each of them:

    plain_sum      sum_i r_i = 0
    moment_sum     sum_i x_i r_i = 0
    combined_sum   the two above with sum x_i/(x_i^2 - 1) eliminated
    trace          f + gamma sum x_i + k(alpha + beta + k - 1) = 0
    inverse_pairs  f = sum_{i<j} 2/(x_i x_j) + (alpha - beta - gamma) sum 1/x_i

where r_i is the Bethe residual of zero i.

Each residual is reported in absolute form and scaled by the magnitude of
its largest term, where a term's magnitude is the sum of the absolute values
of its summands. The inverse-zero rule needs k >= 2 and every |x_i| above
``zero_guard``; otherwise it is flagged as not applicable.
"""
from dataclasses import dataclass

import numpy as np

from .errors import RootOnSingularity
from .model import SpectralParams
from .polyroots import RootSet
from .tolerances import DEFAULT


@dataclass(frozen=True)
class SumRuleReport:
    plain_sum_residual: float
    moment_sum_residual: float
    combined_sum_residual: float
    inverse_pairs_residual: float
    trace_residual: float
    inverse_pairs_applicable: bool
    plain_sum_scaled: float = 0.0
    moment_sum_scaled: float = 0.0
    combined_sum_scaled: float = 0.0
    inverse_pairs_scaled: float = 0.0
    trace_scaled: float = 0.0
    # (sum 1/x)^2 - (k-1) sum 1/x^2 in place of the pair sum; equal only for k = 2
    inverse_pairs_expanded_residual: float = float("nan")

    def scaled(self):
        """Name -> scaled residual for every applicable rule."""
        out = {"plain_sum": self.plain_sum_scaled, "moment_sum": self.moment_sum_scaled,
               "combined_sum": self.combined_sum_scaled, "trace": self.trace_scaled}
        if self.inverse_pairs_applicable:
            out["inverse_pairs"] = self.inverse_pairs_scaled
        return out

    def passes(self, tol=DEFAULT.sumrule_tol):
        return all(v < tol for v in self.scaled().values())

    def as_dict(self):
        return dict(self.__dict__)


def _rule(*terms):
    """(|sum of terms|, that value / largest term magnitude); terms are summand arrays."""
    total = sum(float(np.sum(t)) for t in terms)
    scale = max(float(np.sum(np.abs(t))) for t in terms)
    return abs(total), abs(total) / scale if scale > 0 else abs(total)


def sum_rule_report(rs, f, s: SpectralParams, tol=DEFAULT) -> SumRuleReport:
    x = np.asarray(rs.roots if isinstance(rs, RootSet) else rs, dtype=float).reshape(-1)
    k = x.size
    if k and np.min(np.minimum(np.abs(x - 1), np.abs(x + 1))) < tol.singular_tol:
        raise RootOnSingularity("a zero lies on one of the poles +-1")
    a, b, g = s.alpha, s.beta, s.gamma
    c = np.full(1, float(k * (a + b + k - 1)))
    inv = 1.0 / (x * x - 1)
    plain = _rule((a - b) * inv, (a + b) * x * inv, np.full(1, k * g))
    moment = _rule((a + b) * inv, (a - b) * x * inv, g * x, c)
    combined = _rule(g * x, 4 * a * b / (a + b) * inv,
                np.full(1, k * (a + b + k - 1 - g * (a - b) / (a + b))))
    trace = _rule(np.full(1, f), g * x, c)

    pairs_ok = k >= 2 and bool(np.all(np.abs(x) > tol.zero_guard))
    inv_pairs = (float("nan"), float("nan"))
    expanded = float("nan")
    if pairs_ok:
        y = 1.0 / x
        iu = np.triu_indices(k, 1)
        pairs = 2.0 * np.outer(y, y)[iu]
        inv_pairs = _rule(np.full(1, f), -pairs, -(a - b - g) * y)
        expanded = abs(f - y.sum() ** 2 + (k - 1) * np.sum(y * y) - (a - b - g) * y.sum())
    return SumRuleReport(plain[0], moment[0], combined[0], inv_pairs[0], trace[0], pairs_ok,
                         plain[1], moment[1], combined[1], inv_pairs[1], trace[1], expanded)
