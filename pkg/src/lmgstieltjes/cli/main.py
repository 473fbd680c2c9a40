"""Command line front end.

Exit codes: 0 success, 2 a verification check failed, 3 numerical
non-convergence, 4 bad input.
"""
import argparse
import json
import sys

from ..errors import InputError, LMGError
from ..model import PhysicalParams, SpectralParams
from .document import SpectrumDocument, to_csv, to_table
from .pipeline import MODES, RunConfig, SweepConfig, run_electro, run_oracle, run_spectrum, run_sweep, run_verify

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_INPUT = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _tol_item(text):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None


def build_parser():
    p = _Parser(prog="lmg-stieltjes", description="Exact two-site Bose-Hubbard spectra from extended Heine-Stieltjes polynomials.")
    p.add_argument("mode", choices=MODES)
    p.add_argument("--k", type=int, required=True, help="number of boson pairs (polynomial degree)")
    g = p.add_argument_group("spectral parameters")
    g.add_argument("--alpha", type=float)
    g.add_argument("--beta", type=float)
    g.add_argument("--gamma", type=float)
    h = p.add_argument_group("Hamiltonian parameters")
    h.add_argument("--t", type=float)
    h.add_argument("--U", type=float)
    h.add_argument("--nu1", type=int)
    h.add_argument("--nu2", type=int)
    p.add_argument("--oracle", action="store_true", help="attach Fock-space energies")
    p.add_argument("--tol", type=_tol_item, action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--out", help="write here instead of stdout")
    p.add_argument("--format", dest="fmt", choices=("json", "csv", "table"), default=None)
    p.add_argument("--digits", type=int, default=10, help="significant digits in CSV and table output")
    s = p.add_argument_group("sweep")
    s.add_argument("--sweep-param")
    s.add_argument("--sweep-from", type=float)
    s.add_argument("--sweep-to", type=float)
    s.add_argument("--sweep-steps", type=int)
    s.add_argument("--jobs", type=int, default=1, help="worker processes for sweep points")
    p.add_argument("--electro-max-k", type=int, default=40, help="largest k for the electrostatic check in verify")
    p.add_argument("--perturb-roots", type=float, default=0.0, help=argparse.SUPPRESS)
    return p


def job_from_args(a) -> RunConfig:
    spectral = [a.alpha, a.beta, a.gamma]
    physical = [a.t, a.U, a.nu1, a.nu2]
    has_s = any(v is not None for v in spectral)
    has_p = any(v is not None for v in physical)
    if has_s == has_p:
        raise InputError("give exactly one of --alpha/--beta/--gamma and --t/--U/--nu1/--nu2")
    if has_s:
        if any(v is None for v in spectral):
            raise InputError("--alpha, --beta and --gamma are all required")
        sp, ph = SpectralParams(a.alpha, a.beta, a.gamma), None
    else:
        if any(v is None for v in physical):
            raise InputError("--t, --U, --nu1 and --nu2 are all required")
        sp, ph = None, PhysicalParams(a.t, a.U, a.nu1, a.nu2, a.k)
    sweep_args = [a.sweep_param, a.sweep_from, a.sweep_to, a.sweep_steps]
    sweep = None
    if any(v is not None for v in sweep_args):
        if any(v is None for v in sweep_args):
            raise InputError("--sweep-param, --sweep-from, --sweep-to and --sweep-steps go together")
        sweep = SweepConfig(a.sweep_param, a.sweep_from, a.sweep_to, a.sweep_steps)
    elif a.mode == "sweep":
        raise InputError("sweep mode needs --sweep-param, --sweep-from, --sweep-to and --sweep-steps")
    fmt = a.fmt or ("table" if a.mode == "verify" else "json")
    return RunConfig(a.mode, a.k, sp, ph, sweep, fmt, a.out, dict(a.tol), a.oracle, a.digits,
                   a.perturb_roots, a.electro_max_k, a.jobs)


def _dumps(d):
    from .document import _enc
    return json.dumps(_enc(d), indent=1, allow_nan=False)


def render(job: RunConfig, result):
    fmt = job.fmt
    if isinstance(result, SpectrumDocument):
        if fmt == "csv":
            return to_csv(result, job.digits)
        if fmt == "table":
            return to_table(result, job.digits)
        return result.to_json() + "\n"
    if hasattr(result, "to_csv"):   # sweep
        if fmt in ("csv", "table"):
            return result.to_csv(job.digits)
        return _dumps(result.to_dict()) + "\n"
    if hasattr(result, "to_text"):  # verify report
        return result.to_text() if fmt == "table" else _dumps(result.to_dict()) + "\n"
    return _dumps(result) + "\n"


def execute(job: RunConfig):
    """(text, exit code) for a validated run."""
    if job.mode == "spectrum":
        res = run_spectrum(job)
    elif job.mode == "oracle":
        res = run_oracle(job)
    elif job.mode == "verify":
        res = run_verify(job)
    elif job.mode == "electro":
        res = run_electro(job)
    else:
        res = run_sweep(job)
    code = res.exit_code if hasattr(res, "exit_code") else EXIT_OK
    return render(job, res), code


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        job = job_from_args(args)
        text, code = execute(job)
    except LMGError as e:
        print(f"lmg-stieltjes: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    if job.out:
        with open(job.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
