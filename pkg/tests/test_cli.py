import csv
import io
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from lmgstieltjes.cli import main
from lmgstieltjes.cli.document import SpectrumDocument, csv_header
from lmgstieltjes.fock import sector_spectrum
from lmgstieltjes.model import Sector

HALF = ["--alpha", "0.5", "--beta", "0.5", "--gamma", "0.5"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_json_round_trip(capsys):
    code, out, _ = run(capsys, "spectrum", "--k", "2", *HALF)
    assert code == 0
    doc = SpectrumDocument.from_json(out)
    assert len(doc.entries) == 3
    assert doc.entries[0].f == pytest.approx(0.5141, abs=5e-4)
    assert SpectrumDocument.from_json(doc.to_json()) == doc
    # physical model exists for alpha = beta = 1/2, so energies are attached
    assert all(e.energy is not None for e in doc.entries)


def test_runs_are_deterministic(capsys):
    _, a, _ = run(capsys, "spectrum", "--k", "9", "--alpha", "1.3", "--beta", "0.4", "--gamma", "0.7")
    _, b, _ = run(capsys, "spectrum", "--k", "9", "--alpha", "1.3", "--beta", "0.4", "--gamma", "0.7")
    assert SpectrumDocument.from_json(a).equal_ignoring_time(SpectrumDocument.from_json(b))


def test_csv_matches_json(capsys):
    args = ["spectrum", "--k", "4", "--alpha", "1.3", "--beta", "0.4", "--gamma", "0.7"]
    _, js, _ = run(capsys, *args)
    _, cs, _ = run(capsys, *args, "--format", "csv", "--digits", "17")
    rows = list(csv.reader(io.StringIO(cs)))
    assert rows[0] == csv_header(4)
    assert len(rows) == 1 + 5
    doc = SpectrumDocument.from_json(js)
    for row, e in zip(rows[1:], doc.entries):
        assert int(row[1]) == e.zeta
        assert float(row[2]) == e.f
        assert [float(v) for v in row[9:13]] == e.roots


def test_oracle_mode(capsys):
    code, out, _ = run(capsys, "oracle", "--k", "5", "--t", "0.8", "--U", "1.2", "--nu1", "1", "--nu2", "0")
    assert code == 0
    d = json.loads(out)
    assert np.allclose(d["energies"], sector_spectrum(Sector(1, 0, 5), 0.8, 1.2))


def test_physical_spectrum_carries_oracle(capsys):
    _, out, _ = run(capsys, "spectrum", "--k", "6", "--t", "-0.5", "--U", "1", "--nu1", "0", "--nu2", "1")
    doc = SpectrumDocument.from_json(out)
    assert max(e.oracle_deviation for e in doc.entries) < 1e-10
    assert all(e.physical_roots is not None for e in doc.entries)


def test_verify_passes_and_fails(capsys):
    code, out, _ = run(capsys, "verify", "--k", "8", "--t", "0.5", "--U", "1", "--nu1", "0", "--nu2", "0")
    assert code == 0, out
    assert "all checks passed" in out
    code, out, _ = run(capsys, "verify", "--k", "8", *HALF, "--perturb-roots", "1e-6")
    assert code == 2
    assert "FAIL" in out


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--k", "3", *HALF, "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["ok"]
    names = {c["name"] for c in d["checks"]}
    assert {"root_certificate", "bae_residual", "trace_identity", "sum_rules",
            "oracle_energies", "electrostatic_match"} <= names


def test_electro_mode(capsys):
    code, out, _ = run(capsys, "electro", "--k", "3", "--alpha", "1.2", "--beta", "0.8", "--gamma", "0.4")
    assert code == 0
    eqs = json.loads(out)["equilibria"]
    assert sorted((e["k1"], e["k2"]) for e in eqs) == [(0, 3), (1, 2), (2, 1), (3, 0)]
    assert all(e["hessian_pd"] for e in eqs)


def test_sweep_rows_and_jobs(capsys):
    args = ["sweep", "--k", "3", "--alpha", "1.2", "--beta", "0.8", "--gamma", "0.4",
            "--sweep-param", "gamma", "--sweep-from", "0.1", "--sweep-to", "2", "--sweep-steps", "6"]
    code, one, _ = run(capsys, *args, "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(one)))
    assert len(rows) == 1 + 6 * 4
    _, two, _ = run(capsys, *args, "--format", "csv", "--jobs", "2")
    assert one == two


def test_zero_near_origin_is_flagged(capsys):
    # the middle k = 2 state of (2, 0.5, gamma) has a zero crossing the origin near gamma = 1.1
    args = ["sweep", "--k", "2", "--alpha", "2", "--beta", "0.5", "--gamma", "1",
            "--sweep-param", "gamma", "--sweep-from", "0.8", "--sweep-to", "1.15", "--sweep-steps", "3"]
    _, out, _ = run(capsys, *args)
    d = json.loads(out)
    assert len(d["points"]) == 3
    assert all(p["error"] is None for p in d["points"])


@pytest.mark.parametrize("argv", [
    ["spectrum", "--k", "2"],
    ["spectrum", "--k", "2", *HALF, "--t", "1"],
    ["spectrum", "--k", "2", "--alpha", "1"],
    ["spectrum", "--k", "-1", *HALF],
    ["spectrum", "--k", "2", "--t", "1", "--U", "0", "--nu1", "0", "--nu2", "0"],
    ["spectrum", "--k", "2", *HALF, "--tol", "nonsense=1"],
    ["spectrum", "--k", "2", *HALF, "--tol", "bae_tol"],
    ["sweep", "--k", "2", *HALF],
    ["oracle", "--k", "2", "--alpha", "1.3", "--beta", "0.5", "--gamma", "1"],
    ["nomode", "--k", "2"],
])
def test_bad_input_exits_4(capsys, argv):
    with pytest.raises(SystemExit) as e:
        sys.exit(main(argv))
    assert e.value.code == 4


def test_out_file(tmp_path, capsys):
    target = tmp_path / "s.json"
    code, out, _ = run(capsys, "spectrum", "--k", "2", *HALF, "--out", str(target))
    assert code == 0 and out == ""
    assert len(SpectrumDocument.from_json(target.read_text()).entries) == 3


def test_module_entry_point_and_fallback_backend():
    env = dict(os.environ, LMGSTIELTJES_PURE_PYTHON="1")
    r = subprocess.run([sys.executable, "-m", "lmgstieltjes", "spectrum", "--k", "2", *HALF],
                       capture_output=True, text=True, env=env)
    assert r.returncode == 0, r.stderr
    doc = json.loads(r.stdout)
    assert doc["meta"]["backend"] == "python"
    assert len(doc["entries"]) == 3
