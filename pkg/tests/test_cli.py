import csv
import json

import pytest

from padicframes.cli import main
from padicframes.functions import function_to_json
from padicframes.wavelets import IndexSet, build_family, kozyrev_generators


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_example_needs_projection(capsys):
    argv = ["bounds", "--p", "2", "--system", "kozyrev", "--j", "-1..0", "--m", "1", "--space", "1,1", "--span-only"]
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert json.loads(out)["labels"] == ["(l=1, j=-1, a=1/2)"]
    assert "--project" in err
    code, out, _ = run(capsys, *argv, "--project")
    rep = json.loads(out)
    assert code == 0 and rep["projected"] is True
    assert rep["bounds"]["A"] == pytest.approx(1, abs=1e-9) and rep["bounds"]["B"] == pytest.approx(1, abs=1e-9)


def test_bounds_in_containing_space(capsys):
    code, out, _ = run(capsys, "bounds", "--space", "2,1", "--span-only")
    rep = json.loads(out)
    assert code == 0 and rep["classification"] == "parseval" and rep["tight"]
    code, out, _ = run(capsys, "bounds", "--space", "2,1")
    rep = json.loads(out)
    assert rep["bounds"]["A"] == 0 and rep["classification"] == "besselet"


def test_invalid_prime(capsys):
    code, _, err = run(capsys, "bounds", "--p", "4")
    assert code == 1 and "p must be prime" in err


@pytest.mark.parametrize("argv", [
    ["bounds", "--space", "5,3"],
    ["bounds", "--j", "2..1"],
    ["bounds", "--p", "101"],
    ["bounds", "--system", "wavelet"],
    ["bounds", "--space", "x"],
])
def test_config_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_argparse_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bounds", "--bogus"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["check", "unknown"])
    assert exc.value.code == 1


def test_duplicated_family_file_doubles_bounds(tmp_path, capsys):
    fam = build_family(kozyrev_generators(2), IndexSet(-1, 0, 1))
    single = tmp_path / "single.json"
    double = tmp_path / "double.json"
    single.write_text(json.dumps([function_to_json(f) for f in fam.functions]))
    double.write_text(json.dumps([function_to_json(f) for f in fam.functions * 2]))
    _, out1, _ = run(capsys, "bounds", "--family", str(single), "--span-only")
    _, out2, _ = run(capsys, "bounds", "--family", str(double), "--span-only")
    b1, b2 = json.loads(out1)["bounds"], json.loads(out2)["bounds"]
    assert b2["A"] == pytest.approx(2 * b1["A"]) and b2["B"] == pytest.approx(2 * b1["B"])


def test_check_perturb_example(capsys):
    code, out, err = run(capsys, "check", "perturb", "--p", "3", "--trials", "50", "--seed", "7")
    rep = json.loads(out)
    assert code == 0 and rep["satisfied"] == 50 and rep["trials"] == 50
    assert "50/50 satisfied" in err


def test_check_decomposition_example(capsys):
    code, out, _ = run(capsys, "check", "decomposition", "--p", "2")
    rep = json.loads(out)
    assert code == 0
    assert max(i["details"]["maxRelResidual"] for i in rep["instances"]) <= 1e-8


def test_check_tight_dual_on_kozyrev(capsys):
    code, out, _ = run(capsys, "check", "tight-dual")
    rep = json.loads(out)
    first = rep["instances"][0]["details"]
    assert code == 0 and first["tight"] and first["alpha"] == pytest.approx(1)


def test_family_and_csv_dump(tmp_path, capsys):
    path = tmp_path / "F.csv"
    code, out, _ = run(capsys, "family", "--out", str(path))
    rep = json.loads(out)
    assert code == 0 and rep["manifest"]["count"] == 4
    rows = list(csv.reader(path.open()))
    assert len(rows) == 4 and len(rows[0]) == 8
    re_, im_ = (float(t) for t in rows[0][0].split(","))
    assert isinstance(re_, float) and isinstance(im_, float)


def test_dual_and_reconstruct(capsys):
    code, out, _ = run(capsys, "dual", "--p", "3")
    rep = json.loads(out)
    assert code == 0 and rep["satisfied"] and rep["bounds"]["A"] == pytest.approx(1)
    code, out, _ = run(capsys, "reconstruct", "--p", "3", "--vectors", "5")
    rep = json.loads(out)
    assert code == 0 and rep["maxRelResidual"] <= 1e-8


def test_csv_report_format(capsys):
    code, out, _ = run(capsys, "bounds", "--format", "csv", "--span-only")
    header, values = list(csv.reader(out.splitlines()))
    assert code == 0 and "bounds.A" in header and len(header) == len(values)


def test_tolerance_overrides_are_echoed(capsys):
    _, out, _ = run(capsys, "bounds", "--tol-bound", "1e-6", "--span-only")
    assert json.loads(out)["tolerances"]["bound"] == 1e-6


def test_same_seed_same_bytes(capsys):
    _, a, _ = run(capsys, "check", "dual-pair", "--trials", "10", "--seed", "0x2A")
    _, b, _ = run(capsys, "check", "dual-pair", "--trials", "10", "--seed", "42")
    assert a == b
