import json
import shutil

import pytest

from surfdyn.cli import main
from surfdyn.io import DEFAULT_CATALOG, read_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def structured(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "structured")
    rep = json.loads(out)
    assert rep["schema"] == "surfdyn.report/1"
    return code, rep


@pytest.mark.parametrize("entry, gk, geometric", [
    ("identity-p2", "gk3", "yes"), ("nongeom-rho2", "exponential", "not_determined"),
    ("fibration-j1", "gk4", "no"), ("parabolic-j2", "gk5", "yes")])
def test_classify(capsys, entry, gk, geometric):
    code, rep = structured(capsys, "classify", "--entry", entry)
    assert code == 0
    assert rep["summary"]["gk"] == gk and rep["summary"]["geometric"] == geometric


def test_hilbert_plane(capsys):
    code, rep = structured(capsys, "hilbert", "--entry", "identity-p2", "--n-max", "4")
    assert code == 0
    assert [r[4] for r in rep["rows"]][1:] == [3, 6, 10, 15]


def test_hilbert_fits(capsys):
    _, rep = structured(capsys, "hilbert", "--entry", "fibration-j1", "--n-max", "60")
    assert (rep["summary"]["fit_rate"], rep["summary"]["fit_exponent"]) == (1.0, 3)
    _, rep = structured(capsys, "hilbert", "--entry", "nongeom-rho2", "--n-max", "20")
    assert abs(rep["summary"]["fit_rate"] - 4) < 0.04
    assert "rho^2" in rep["summary"]["relation"] and rep["summary"]["map_rho"].startswith("2")


def test_degseq_and_orbit(capsys):
    _, rep = structured(capsys, "degseq", "--entry", "cremona")
    assert rep["summary"]["degrees"] == [2, 1, 2, 1]
    _, rep = structured(capsys, "degseq", "--entry", "tau-phi")
    assert rep["summary"]["degrees"] == [2, 4, 8, 16]
    code, out, _ = run(capsys, "orbit", "--entry", "cremona")
    assert code == 0 and "known_unstable" in out and "curve a=0" in out


def test_orbit_attach_writes_certificate(capsys, tmp_path):
    cat = tmp_path / "catalog"
    shutil.copytree(DEFAULT_CATALOG, cat)
    d = read_json(cat / "coordinate" / "tau-phi.json")
    assert "stability" not in d
    code, rep = structured(capsys, "orbit", "--catalog", str(cat), "--entry", "tau-phi",
                           "--horizon", "8", "--attach")
    assert code == 0
    d = read_json(cat / "coordinate" / "tau-phi.json")
    assert d["stability"]["kind"] == "certified_stable" and d["stability"]["horizon"] == 8


def test_scan_and_curve(capsys):
    _, rep = structured(capsys, "scan", "--entry", "tau-phi")
    assert len(rep["summary"]["flagged"]) == 3
    _, rep = structured(capsys, "curve", "--entry", "curve-doubling", "--n-max", "10")
    assert [r[2] for r in rep["rows"]] == [2**n for n in range(11)]


def test_recurrence(capsys):
    _, rep = structured(capsys, "recurrence", "--rule", "shift:2", "--n-max", "60")
    assert abs(rep["summary"]["rate"] - 1.6180339887) < 1e-9


def test_formats(capsys):
    code, out, _ = run(capsys, "list", "--format", "delimited")
    assert code == 0 and "identity-p2\tmap" in out
    code, out, _ = run(capsys, "list")
    assert "tau-phi" in out


def test_verify_exit_codes(capsys, data_dir):
    code, rep = structured(capsys, "verify", "--scope", "io,lattice,maps")
    assert code == 0 and rep["summary"]["failures"] == 0
    code, rep = structured(capsys, "verify", "--catalog", str(data_dir / "corrupt-exceptional"))
    assert code == 2
    assert any("excess-intersection identity" in r[3] for r in rep["rows"])
    code, rep = structured(capsys, "verify", "--catalog", str(data_dir / "parity"))
    assert code == 2 and any("ParityError" in r[3] for r in rep["rows"])


def test_error_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "classify", "--entry", "nope")
    assert code == 3 and "no catalog entry" in err
    code, _, err = run(capsys, "classify")
    assert code == 3
    code, _, err = run(capsys, "degseq", "--entry", "fibration-j1")
    assert code == 3 and "coordinate" in err
    code, _, err = run(capsys, "classify", "--catalog", str(tmp_path))
    assert code == 3


def test_resource_exit_code(capsys):
    code, _, err = run(capsys, "degseq", "--entry", "tau-phi", "--n-max", "6", "--max-degree", "10")
    assert code == 4 and "exceeds" in err


def test_formal_warning_surfaces(capsys):
    code, rep = structured(capsys, "classify", "--entry", "cremona")
    assert code == 0 and rep["summary"]["formal"] is True
    assert any("not certified" in w for w in rep["warnings"])
