"""Default numerical tolerances and a small override container."""
from dataclasses import dataclass, fields, replace

from .errors import InputError


@dataclass(frozen=True)
class Tolerances:
    singular_tol: float = 1e-10     # absolute distance of a root from +-1
    reality_tol: float = 1e-8       # imaginary part / matrix norm
    rec_tol: float = 1e-9           # recurrence row residual / (norm(F) max|b|)
    degeneracy_tol: float = 1e-10   # relative gap between Van Vleck constants
    root_tol: float = 1e-12         # scaled polynomial residual at a root
    cert_tol: float = 1e-8          # backward error accepted for a refined root set
    bae_tol: float = 1e-8
    simplicity_tol: float = 1e-9    # relative to max(1, |x|) of the pair
    electro_tol: float = 1e-10
    zero_guard: float = 1e-6
    sumrule_tol: float = 1e-8
    ode_tol: float = 1e-8
    trace_tol: float = 1e-9
    oracle_tol: float = 1e-8
    match_tol: float = 1e-6         # Hausdorff distance, equilibria vs roots
    max_iters: int = 200

    def with_overrides(self, overrides):
        """Return a copy with entries of ``overrides`` (name -> value) applied."""
        if not overrides:
            return self
        known = {f.name: f.type for f in fields(self)}
        clean = {}
        for name, value in overrides.items():
            if name not in known:
                raise InputError(f"unknown tolerance {name!r}; known: {', '.join(sorted(known))}")
            clean[name] = int(value) if name == "max_iters" else float(value)
        return replace(self, **clean)

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT = Tolerances()
