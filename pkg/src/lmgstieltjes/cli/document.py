"""Spectrum documents and their JSON / CSV / text encodings.

JSON numbers are written with ``repr`` precision, which round-trips every
double exactly. Non-finite floats (monic coefficients past double range)
are written as the strings "inf", "-inf" and "nan".
"""
import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields

SCHEMA_VERSION = 1


def _enc(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if isinstance(v, (list, tuple)):
        return [_enc(u) for u in v]
    if isinstance(v, dict):
        return {k: _enc(u) for k, u in v.items()}
    return v


def _dec(v):
    if v in ("inf", "-inf", "nan"):
        return float(v)
    if isinstance(v, list):
        return [_dec(u) for u in v]
    if isinstance(v, dict):
        return {k: _dec(u) for k, u in v.items()}
    return v


def _same(a, b):
    """Equality that treats nan as equal to nan."""
    if isinstance(a, float) and isinstance(b, float):
        return a == b or (math.isnan(a) and math.isnan(b))
    if isinstance(a, (list, tuple)) and isinstance(b, (list, tuple)):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(_same(a[k], b[k]) for k in a)
    return a == b


@dataclass
class SpectrumEntry:
    zeta: int
    f: float
    coeffs: list            # ascending monic coefficients
    roots: list             # ascending, in the polynomial variable
    occupation: list        # [k1, k2]
    energy: float = None
    max_bae_residual: float = None
    sum_rule_report: dict = None
    physical_roots: list = None     # only when the variable is reflected
    oracle_energy: float = None
    oracle_deviation: float = None
    coeffs_scaled: list = None      # coeffs = coeffs_scaled * exp(log_scale), always finite
    log_scale: float = 0.0
    max_ode_residual: float = None

    def __eq__(self, other):
        return isinstance(other, SpectrumEntry) and _same(asdict(self), asdict(other))


@dataclass
class SpectrumDocument:
    input: dict
    entries: list
    oracle: list = None
    meta: dict = field(default_factory=dict)

    def __eq__(self, other):
        return isinstance(other, SpectrumDocument) and _same(self.to_dict(), other.to_dict())

    def equal_ignoring_time(self, other):
        a, b = self.to_dict(), other.to_dict()
        a["meta"].pop("timestamp", None)
        b["meta"].pop("timestamp", None)
        return _same(a, b)

    def to_dict(self):
        d = {"input": self.input, "entries": [asdict(e) for e in self.entries], "meta": dict(self.meta)}
        if self.oracle is not None:
            d["oracle"] = self.oracle
        return d

    def to_json(self, indent=1):
        return json.dumps(_enc(self.to_dict()), indent=indent, allow_nan=False)

    @classmethod
    def from_dict(cls, d):
        d = _dec(d)
        names = {f.name for f in fields(SpectrumEntry)}
        entries = [SpectrumEntry(**{k: v for k, v in e.items() if k in names}) for e in d["entries"]]
        return cls(d["input"], entries, d.get("oracle"), d.get("meta", {}))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def csv_header(k):
    return (["sweep_value", "zeta", "f", "energy"] + [f"b{j}" for j in range(k + 1)]
            + [f"x{j}" for j in range(1, k + 1)] + ["occupation_k1", "occupation_k2", "max_bae_residual"])


def _fmt(v, digits):
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.{digits}g}"
    return str(v)


def csv_rows(doc: SpectrumDocument, sweep_value=None, digits=10):
    out = []
    for e in doc.entries:
        row = [sweep_value, e.zeta, e.f, e.energy] + list(e.coeffs) + list(e.roots)
        row += [e.occupation[0], e.occupation[1], e.max_bae_residual]
        out.append([_fmt(v, digits) for v in row])
    return out


def to_csv(docs, digits=10):
    """``docs`` is a SpectrumDocument or a list of (sweep value, document) pairs."""
    if isinstance(docs, SpectrumDocument):
        docs = [(None, docs)]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    k = next((len(d.entries[0].roots) for _, d in docs if d is not None and d.entries), 0)
    w.writerow(csv_header(k))
    for v, d in docs:
        if d is not None:
            w.writerows(csv_rows(d, v, digits))
    return buf.getvalue()


def to_table(doc: SpectrumDocument, digits=10):
    lines = [f"{'zeta':>4} {'occ':>9} {'f':>{digits + 8}} {'energy':>{digits + 8}} {'bae':>9}  roots"]
    for e in doc.entries:
        occ = f"({e.occupation[0]},{e.occupation[1]})"
        en = "-" if e.energy is None else f"{e.energy:.{digits}g}"
        roots = " ".join(f"{x:.{min(digits, 8)}g}" for x in e.roots[:6]) + (" ..." if len(e.roots) > 6 else "")
        lines.append(f"{e.zeta:>4} {occ:>9} {e.f:>{digits + 8}.{digits}g} {en:>{digits + 8}} "
                     f"{e.max_bae_residual:>9.2e}  {roots}")
    return "\n".join(lines) + "\n"
