import hashlib
import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from nanotube_spectra import cli
from nanotube_spectra.artifacts import parse_csv


def run(args, tmp_path, *extra):
    return cli.main(list(args) + ["--out", str(tmp_path), *extra])


def digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_moments_all_methods_agree(tmp_path):
    assert run(["moments", "--p", "5", "--q", "1", "--kmax", "8", "--methods", "all"], tmp_path) == 0
    meta, cols, rows = parse_csv((tmp_path / "moments.csv").read_text())
    assert cols == ["k", "method", "value"]
    assert meta["crosscheck"] == "agree"
    assert meta["config"]["p"] == 5 and "version" in meta and "seed" in meta
    by_method = {}
    for k, m, v in rows:
        by_method.setdefault(m, []).append(int(v))
    assert len(by_method) == 4
    assert len({tuple(v) for v in by_method.values()}) == 1
    assert by_method["oracle"][6] == 35181


def test_mismatch_exit_code(tmp_path, monkeypatch):
    import nanotube_spectra.moments as mm

    monkeypatch.setitem(mm._DISPATCH, "indicator", lambda ch, k: 0)
    assert run(["moments", "--p", "5", "--q", "0", "--kmax", "3"], tmp_path) == 4


def test_nonconvergence_exit_code(tmp_path, monkeypatch):
    import nanotube_spectra.mgf as mgf_mod
    from nanotube_spectra.numerics import NoConvergence

    def boom(*a, **k):
        raise NoConvergence("forced")

    monkeypatch.setattr(mgf_mod, "mgf", boom)
    assert run(["mgf", "--p", "5", "--q", "0", "--t", "0.1"], tmp_path) == 3


@pytest.mark.parametrize("args", [
    ["moments", "--p", "2", "--q", "2"],
    ["moments", "--p", "1", "--q", "1", "--allow-thin"],
    ["moments", "--p", "5", "--q", "0", "--kmax", "-1"],
    ["moments", "--p", "5", "--q", "0", "--methods", "bogus"],
    ["sample", "--p", "5", "--q", "0", "--n", "0"],
    ["sample", "--p", "5", "--q", "0", "--seed", "-3"],
    ["pdf", "--p", "5", "--q", "0", "--grid", "1"],
    ["lattice", "--rings", "-1"],
])
def test_validation_exit_code(tmp_path, args):
    assert run(args, tmp_path) == 2


def test_allow_thin(tmp_path):
    assert run(["moments", "--p", "2", "--q", "2", "--allow-thin", "--kmax", "5"], tmp_path) == 0


def test_pdf_zigzag_pieces(tmp_path):
    assert run(["pdf", "--p", "5", "--q", "0", "--grid", "2000"], tmp_path) == 0
    _, cols, rows = parse_csv((tmp_path / "pieces.csv").read_text())
    got = sorted((round(float(a), 3), round(float(b), 3)) for a, b, _ in rows)
    assert got == [(0.146, 2.618), (0.146, 2.618), (0.382, 6.854), (0.382, 6.854), (1.0, 9.0)]
    _, cols, rows = parse_csv((tmp_path / "pdf.csv").read_text())
    assert cols == ["x", "pdf", "cdf"] and len(rows) == 2000
    assert float(rows[-1][2]) == pytest.approx(1.0, abs=1e-9)


def test_pdf_atoms(tmp_path):
    assert run(["pdf", "--p", "6", "--q", "0", "--grid", "10"], tmp_path) == 0
    _, cols, rows = parse_csv((tmp_path / "atoms.csv").read_text())
    assert rows == [["1.0", "1/6"]]


def test_sample_determinism_and_json(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["sample", "--p", "5", "--q", "1", "--n", "500", "--seed", "42"]
    assert run(args, a) == 0 and run(args, b) == 0
    for name in ("samples.csv", "histogram.csv"):
        assert digest(a / name) == digest(b / name)
    assert run(args, a, "--format", "json") == 0
    doc = json.loads((a / "samples.json").read_text())
    assert set(doc) == {"meta", "data"}
    assert doc["meta"]["seed"] == 42
    assert len(doc["data"]["lambda"]) == 500
    h = json.loads((a / "histogram.json").read_text())
    assert sum(h["data"]["count"]) == 500


def test_mgf_and_lattice(tmp_path):
    assert run(["mgf", "--p", "5", "--q", "5", "--t", "0", "0.1"], tmp_path) == 0
    _, cols, rows = parse_csv((tmp_path / "mgf.csv").read_text())
    assert cols == ["t", "m", "err"] and float(rows[0][1]) == 1.0
    assert run(["lattice", "--rings", "1"], tmp_path) == 0
    meta, _, rows = parse_csv((tmp_path / "edges.csv").read_text())
    assert meta["vertices"] == 42 and meta["edges"] == 120 and len(rows) == 120
    _, cols, rows = parse_csv((tmp_path / "traces.csv").read_text())
    # mean loop weight: sum(deg)/(2V) = E/V
    assert Fraction(rows[1][1]) == Fraction(120, 42)
    assert float(rows[6][3]) == pytest.approx(float(Fraction(rows[6][1])), rel=1e-10)


def test_env_outdir(tmp_path, monkeypatch):
    monkeypatch.setenv("NANOTUBE_SPECTRA_OUTDIR", str(tmp_path / "env"))
    assert cli.main(["mgf", "--triangular", "--t", "0.2"]) == 0
    assert (tmp_path / "env" / "mgf.csv").exists()


def test_verify_quick_subset(tmp_path, monkeypatch):
    import nanotube_spectra.verification as v

    monkeypatch.setattr(v, "CRITERIA", {k: v.CRITERIA[k] for k in (2, 3)})
    assert run(["verify", "--suite", "quick"], tmp_path) == 0
    _, cols, rows = parse_csv((tmp_path / "verify.csv").read_text())
    assert [r[2] for r in rows] == ["true", "true"]


def test_console_script_and_pure_python_backend(tmp_path):
    env = dict(os.environ, NANOTUBE_SPECTRA_PURE_PYTHON="1")
    code = "from nanotube_spectra import kernels; print(kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    r = subprocess.run([sys.executable, "-m", "nanotube_spectra.cli", "moments", "--p", "5", "--q", "0",
                        "--kmax", "6", "--out", str(tmp_path)], env=env, capture_output=True, text=True)
    assert r.returncode == 0
