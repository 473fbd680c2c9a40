"""Run settings and the spectrum / verify / sweep / oracle / electro pipelines."""
import datetime
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field, replace

import numpy as np

from .. import __version__
from ..electrostatics import all_equilibria, electro_energy, match_to_roots
from ..errors import InputError, LMGError, ParamOutOfRange
from ..fock import full_spectrum, sector_spectrum, union_of_sectors
from ..kernels import BACKEND
from ..model import PhysicalParams, SpectralParams, energy_from_roots, implied_physical, to_spectral
from ..polyroots import bae_residual, bae_rounding_floor, jacobi_backward_errors, ode_residuals_many, ode_sample_points, occupation
from ..spectrum import solve_spectrum
from ..sumrules import sum_rule_report
from ..tolerances import DEFAULT
from .document import SpectrumDocument, SpectrumEntry, to_csv

MODES = ("spectrum", "oracle", "verify", "electro", "sweep")
FORMATS = ("json", "csv", "table")
SPECTRAL_NAMES = ("alpha", "beta", "gamma")
PHYSICAL_NAMES = ("t", "U")


@dataclass(frozen=True)
class SweepConfig:
    param: str
    start: float
    stop: float
    steps: int

    def values(self):
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class RunConfig:
    """One command line invocation, validated."""

    mode: str
    k: int
    spectral: SpectralParams = None
    physical: PhysicalParams = None
    sweep: SweepConfig = None
    fmt: str = "json"
    out: str = None
    tol_overrides: dict = field(default_factory=dict)
    oracle: bool = False
    digits: int = 10
    perturb_roots: float = 0.0
    electro_max_k: int = 40
    jobs: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"unknown mode {self.mode!r}")
        if (self.spectral is None) == (self.physical is None):
            raise InputError("give either --alpha/--beta/--gamma or --t/--U/--nu1/--nu2, not both")
        if self.fmt not in FORMATS:
            raise InputError(f"unknown format {self.fmt!r}")
        if (self.sweep is not None) != (self.mode == "sweep"):
            raise InputError("sweep parameters go with the sweep mode only")
        if self.sweep is not None:
            names = SPECTRAL_NAMES if self.spectral is not None else PHYSICAL_NAMES
            if self.sweep.param not in names:
                raise InputError(f"cannot sweep {self.sweep.param!r} with this parameterisation; choose from {names}")
            if self.sweep.steps < 2:
                raise InputError("a sweep needs at least 2 steps")
        if int(self.k) != self.k or self.k < 0:
            raise ParamOutOfRange(f"k must be a nonnegative integer, got {self.k}")
        self.tolerances  # validates the override names

    @property
    def tolerances(self):
        return DEFAULT.with_overrides(self.tol_overrides)

    def spectral_params(self):
        return self.spectral if self.spectral is not None else to_spectral(self.physical)

    def physical_params(self):
        """Hamiltonian parameters, given or implied (None if there are none)."""
        if self.physical is not None:
            return self.physical
        return implied_physical(self.spectral, self.k)

    def input_echo(self):
        d = {"mode": self.mode, "k": self.k}
        if self.spectral is not None:
            d.update(alpha=self.spectral.alpha, beta=self.spectral.beta, gamma=self.spectral.gamma)
        else:
            p = self.physical
            d.update(t=p.t, U=p.U, nu1=p.nu1, nu2=p.nu2)
        if self.sweep is not None:
            d["sweep"] = {"param": self.sweep.param, "from": self.sweep.start,
                          "to": self.sweep.stop, "steps": self.sweep.steps}
        if self.tol_overrides:
            d["tolerances"] = dict(self.tol_overrides)
        if self.perturb_roots:
            d["perturb_roots"] = self.perturb_roots
        return d

    def at(self, value):
        """Copy with the swept parameter set to ``value`` (mode becomes spectrum)."""
        name = self.sweep.param
        if self.spectral is not None:
            return replace(self, mode="spectrum", sweep=None, spectral=replace(self.spectral, **{name: float(value)}))
        return replace(self, mode="spectrum", sweep=None, physical=replace(self.physical, **{name: float(value)}))


def _meta(job):
    return {"version": __version__, "backend": BACKEND,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
            "tolerances": job.tolerances.as_dict()}


@contextmanager
def stage(name):
    """Prefix module errors with the pipeline stage they came from."""
    try:
        yield
    except LMGError as e:
        raise type(e)(f"{name}: {e}") from e


def oracle_energies(p: PhysicalParams):
    return sector_spectrum(p.sector, p.t, p.U)


def relative_deviation(energies, oracle):
    """|E - E_oracle| / max(|E_oracle|, 1e-12 * max|E_oracle|) per level (both sorted)."""
    e = np.sort(np.asarray(energies, dtype=float))
    o = np.sort(np.asarray(oracle, dtype=float))
    floor = 1e-12 * max(float(np.max(np.abs(o))), 1.0)
    return np.abs(e - o) / np.maximum(np.abs(o), floor)


def _perturbed(roots, eps):
    x = np.array(roots, dtype=float)
    if eps and x.size:
        x[0] += eps * (1 + abs(x[0]))
    return x


def _ode_worst(states, roots):
    """Largest differential-equation residual per state over 20 sample points."""
    if not states or states[0].poly.k == 0:
        return np.zeros(len(states))
    xs = np.array([ode_sample_points(x) for x in roots])
    return ode_residuals_many([st.poly for st in states], xs).max(axis=1)


def solve(job: RunConfig):
    """(spectral params, physical params or None, solved states)."""
    with stage("parameters"):
        s = job.spectral_params()
    p = job.physical_params()
    with stage("spectrum"):
        states = solve_spectrum(job.k, s, job.tolerances)
    return s, p, states


def run_spectrum(job: RunConfig, solved=None) -> SpectrumDocument:
    tol = job.tolerances
    s, p, states = solved if solved is not None else solve(job)
    entries = []
    ode = _ode_worst(states, [st.roots for st in states])
    for st, ode_max in zip(states, ode):
        x = st.roots
        with stage(f"state zeta={st.zeta}"):
            energy = energy_from_roots(x, p, tol.singular_tol) if p is not None else None
            report = sum_rule_report(st.rootset, st.f, s, tol).as_dict() if st.poly.k else None
        entries.append(SpectrumEntry(
            zeta=st.zeta, f=st.f, coeffs=st.poly.coeffs.tolist(), roots=x.tolist(),
            occupation=list(st.occupation), energy=energy,
            max_bae_residual=st.rootset.max_bae_residual if st.poly.k else 0.0,
            sum_rule_report=report,
            physical_roots=(-x[::-1]).tolist() if s.reflected else None,
            coeffs_scaled=st.poly.scaled.tolist(), log_scale=st.poly.log_scale,
            max_ode_residual=float(ode_max)))
    oracle = None
    if p is not None:
        entries.sort(key=lambda e: (e.energy, e.zeta))
        if job.physical is not None or job.oracle:
            with stage("oracle"):
                oracle = oracle_energies(p).tolist()
            dev = relative_deviation([e.energy for e in entries], oracle)
            for e, o, d in zip(entries, oracle, dev):
                e.oracle_energy, e.oracle_deviation = o, float(d)
    return SpectrumDocument(job.input_echo(), entries, oracle, _meta(job))


@dataclass
class Check:
    name: str
    value: float
    tol: float
    passed: bool    # None when skipped
    detail: str = ""

    def line(self):
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[self.passed]
        v = "-" if self.value is None else f"{self.value:.3e}"
        return f"{status:4}  {self.name:<22} {v:>10}  (tol {self.tol:.1e})  {self.detail}".rstrip()


@dataclass
class VerifyReport:
    input: dict
    checks: list
    meta: dict

    @property
    def ok(self):
        return all(c.passed is not False for c in self.checks)

    @property
    def first_failure(self):
        return next((c for c in self.checks if c.passed is False), None)

    @property
    def exit_code(self):
        return 0 if self.ok else 2

    def to_dict(self):
        return {"input": self.input, "ok": self.ok,
                "checks": [dict(c.__dict__) for c in self.checks], "meta": self.meta}

    def to_text(self):
        lines = [c.line() for c in self.checks]
        f = self.first_failure
        lines.append("all checks passed" if f is None else f"FAILED: {f.name}")
        return "\n".join(lines) + "\n"


def run_verify(job: RunConfig) -> VerifyReport:
    """Every invariant for one parameter set; the report lists residual and tolerance per check."""
    tol = job.tolerances
    s, p, states = solve(job)
    k = job.k
    roots = [_perturbed(st.roots, job.perturb_roots) for st in states]
    checks = []

    def add(name, value, limit, detail=""):
        checks.append(Check(name, float(value), limit, bool(value <= limit), detail))

    add("recurrence_residual", max(st.poly.row_residual for st in states), tol.rec_tol)
    if k:
        bw = max(float(np.max(jacobi_backward_errors(st.poly, x))) for st, x in zip(states, roots))
        add("root_certificate", bw, tol.cert_tol)
        # absolute bound, widened per root by what double rounding of the roots forces
        bae, ok, floor = 0.0, True, 0.0
        for x in roots:
            r = np.abs(bae_residual(x, s, tol.singular_tol))
            fl = bae_rounding_floor(x, s)
            bae, floor = max(bae, float(r.max())), max(floor, float(fl.max()))
            ok = ok and bool(np.all(r <= tol.bae_tol + fl))
        checks.append(Check("bae_residual", bae, tol.bae_tol, ok,
                            f"rounding floor up to {floor:.1e}" if floor > 0.1 * tol.bae_tol else ""))
        add("ode_residual", float(np.max(_ode_worst(states, roots))), tol.ode_tol)
        trace = []
        for st, x in zip(states, roots):
            r = st.f + s.gamma * float(np.sum(x)) + k * (s.alpha + s.beta + k - 1)
            trace.append(abs(r) / max(1.0, abs(st.f)))
        add("trace_identity", max(trace), tol.trace_tol)
        reports = [sum_rule_report(x, st.f, s, tol) for st, x in zip(states, roots)]
        worst = max(max(r.scaled().values()) for r in reports)
        skipped = sum(not r.inverse_pairs_applicable for r in reports)
        add("sum_rules", worst, tol.sumrule_tol, f"inverse-zero rule skipped for {skipped} state(s)" if skipped else "")
    occ = sorted(occupation(x) for x in roots)
    want = sorted((k - j, j) for j in range(k + 1))
    checks.append(Check("occupation_bijection", float(occ != want), 0.0, occ == want,
                        "" if occ == want else f"got {occ}"))
    if p is not None:
        energies = [energy_from_roots(x, p, tol.singular_tol) for x in roots]
        dev = relative_deviation(energies, oracle_energies(p))
        add("oracle_energies", float(np.max(dev)), tol.oracle_tol)
        n = p.n
        full = full_spectrum(n, p.t, p.U)
        union = union_of_sectors(n, p.t, p.U)
        add("sector_completeness", float(np.max(relative_deviation(union, full))), 1e-9, f"n = {n}")
    else:
        checks.append(Check("oracle_energies", None, tol.oracle_tol, None, "no boson model for these charges"))
    if k == 0:
        pass
    elif k <= job.electro_max_k and s.gamma > 0:
        with stage("electrostatics"):
            eqs = all_equilibria(k, s, tol)
        matched = match_to_roots(eqs, roots)
        dist = max(d for _, _, d in matched)
        bij = len({i for _, i, _ in matched if i is not None}) == k + 1
        gn = max(e.grad_norm for e in eqs)
        pd = all(e.hessian_pd for e in eqs)
        detail = f"max gradient {gn:.1e}, hessian pd {pd}, bijective {bij}"
        checks.append(Check("electrostatic_match", dist, tol.match_tol,
                            bool(dist <= tol.match_tol and bij and pd), detail))
    else:
        checks.append(Check("electrostatic_match", None, tol.match_tol, None,
                            f"skipped for k > {job.electro_max_k}"))
    return VerifyReport(job.input_echo(), checks, _meta(job))


def run_oracle(job: RunConfig):
    p = job.physical_params()
    if p is None:
        raise InputError("the Fock oracle needs a boson model: alpha and beta must be 1/2 or 3/2")
    e = oracle_energies(p)
    return {"input": job.input_echo(), "sector": [p.nu1, p.nu2, p.k], "n": p.n,
            "t": p.t, "U": p.U, "energies": e.tolist(), "meta": _meta(job)}


def run_electro(job: RunConfig):
    s = job.spectral_params()
    with stage("electrostatics"):
        eqs = all_equilibria(job.k, s, job.tolerances)
    out = []
    for e in eqs:
        out.append({"k1": e.k1, "k2": e.k2, "positions": e.positions.tolist(),
                    "energy": electro_energy(e.positions, s) if e.positions.size else 0.0,
                    "grad_norm": e.grad_norm, "hessian_pd": e.hessian_pd})
    return {"input": job.input_echo(), "equilibria": out, "meta": _meta(job)}


def _sweep_point(job):
    try:
        return run_spectrum(job), None
    except LMGError as e:
        return None, f"{type(e).__name__}: {e}"


@dataclass
class SweepDocument:
    input: dict
    values: list
    documents: list     # SpectrumDocument or None per value
    errors: list        # None or message per value
    diagnostics: list
    meta: dict

    def to_dict(self):
        pts = []
        for v, d, err in zip(self.values, self.documents, self.errors):
            pts.append({"sweep_value": v, "document": None if d is None else d.to_dict(), "error": err})
        return {"input": self.input, "points": pts, "diagnostics": self.diagnostics, "meta": self.meta}

    def to_csv(self, digits=10):
        return to_csv(list(zip(self.values, self.documents)), digits)

    @property
    def n_rows(self):
        return sum(len(d.entries) for d in self.documents if d is not None)


def _levels(doc):
    """Level values in zeta order: energies when present, else f."""
    es = sorted(doc.entries, key=lambda e: e.zeta)
    return np.array([e.energy if e.energy is not None else -e.f for e in es])


def continuity_diagnostics(values, documents, gap_tol=1e-6):
    """Flag level crossings (order change between neighbouring points) and near-degeneracies."""
    out = []
    prev = None
    for v, d in zip(values, documents):
        if d is None:
            prev = None
            continue
        lv = _levels(d)
        order = np.argsort(lv, kind="stable")
        srt = np.sort(lv)
        if srt.size > 1:
            gap = float(np.min(np.diff(srt)) / max(float(np.max(np.abs(srt))), 1.0))
            if gap < gap_tol:
                out.append({"sweep_value": v, "kind": "near_degeneracy", "relative_gap": gap})
        if prev is not None and not np.array_equal(order, prev):
            out.append({"sweep_value": v, "kind": "level_crossing"})
        if any(e.sum_rule_report is not None and not e.sum_rule_report["inverse_pairs_applicable"]
               for e in d.entries if len(e.roots) >= 2):
            out.append({"sweep_value": v, "kind": "zero_near_origin"})
        prev = order
    return out


def run_sweep(job: RunConfig) -> SweepDocument:
    values = [float(v) for v in job.sweep.values()]
    configs = [job.at(v) for v in values]
    if job.jobs > 1:
        with ProcessPoolExecutor(job.jobs) as ex:
            res = list(ex.map(_sweep_point, configs))
    else:
        res = [_sweep_point(sp) for sp in configs]
    docs = [r[0] for r in res]
    errs = [r[1] for r in res]
    return SweepDocument(job.input_echo(), values, docs, errs, continuity_diagnostics(values, docs), _meta(job))
