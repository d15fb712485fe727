import json
import subprocess
import sys

import pytest

from sktnil.cli import main
from sktnil.fileio import read_algebra


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_catalog_entry(capsys):
    code, out, _ = run(capsys, "--format", "structured", "verify", "n4_abelian")
    assert code == 0
    rep = json.loads(out)
    assert rep["is_skt"] is True and rep["step"] == 2
    assert rep["c_text"] == "-e^{1,2,3}"
    assert rep["center_J_invariant"] is True
    assert rep["center_bracket_disagreements"] == []


def test_verify_negative_verdict(capsys, tmp_path):
    from helpers import perturbed_n6
    from sktnil.fileio import write_algebra
    path = tmp_path / "flip.json"
    write_algebra(perturbed_n6((1, 2)), path)
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1
    assert "is_skt: no" in out


def test_text_and_structured_formats(capsys):
    _, text, _ = run(capsys, "verify", "n8_nonabelian")
    _, structured, _ = run(capsys, "verify", "n8_nonabelian", "--format", "structured")
    assert text.startswith("command: verify")
    assert json.loads(structured)["name"] == "n8_nonabelian"


def test_catalog_list_and_show(capsys, tmp_path):
    code, out, _ = run(capsys, "--format", "structured", "catalog", "list")
    assert code == 0 and len(json.loads(out)["entries"]) == 6
    code, out, _ = run(capsys, "catalog", "show", "n6_abelian")
    assert code == 0 and json.loads(out)["dim"] == 6
    path = tmp_path / "n6.json"
    assert run(capsys, "catalog", "show", "n6_abelian", "-o", str(path))[0] == 0
    assert path.read_text() == out


def test_unknown_input_is_exit_2(capsys):
    code, _, err = run(capsys, "verify", "no_such_thing")
    assert code == 2 and "no such file" in err
    code, _, err = run(capsys, "catalog", "show", "nope")
    assert code == 2 and "available" in err


def test_invalid_file_structured_error(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "dim": 4,
        "brackets": [{"i": 1, "j": 2, "targets": [{"k": 3, "coeff": "1"}]},
                     {"i": 1, "j": 3, "targets": [{"k": 1, "coeff": "1"}]}],
        "J": {"pairs": [[1, 2], [3, 4]]},
    }))
    code, _, err = run(capsys, "--format", "structured", "verify", str(path))
    assert code == 2
    e = json.loads(err)
    assert e["axiom"] == "jacobi" and e["witness"] == [1, 2, 3]


def test_compose_and_precondition(capsys, tmp_path):
    out_path = tmp_path / "c12.json"
    code, out, _ = run(capsys, "--format", "structured", "compose", "n4_abelian", "n6_abelian",
                       "--x-index", "4", "--y-index", "6", "-o", str(out_path))
    assert code == 0
    rep = json.loads(out)
    assert rep["irreducibility"]["status"] == "certified"
    assert rep["is_skt"] and rep["abelian_J"] and rep["abelian_J_predicted"]
    T = read_algebra(out_path)
    assert T.dim == 12 and T.provenance["irreducible"] is True
    code, _, err = run(capsys, "--format", "structured", "compose", "n4_abelian", "n6_nonabelian")
    assert code == 2 and json.loads(err)["condition"] == "center_vs_derived"
    code, out, _ = run(capsys, "--format", "structured", "compose", "n4_abelian", "n6_abelian",
                       "--right-irreducible", "no")
    assert code == 1 and json.loads(out)["irreducibility"]["status"] == "inconclusive"


def test_compose_rs_family(capsys):
    code, out, _ = run(capsys, "--format", "structured", "compose", "n4_abelian", "n6_abelian",
                       "--r", "5/2", "--s", "-2")
    assert code == 0 and json.loads(out)["provenance"]["r"] == "5/2"


def test_iterate(capsys, tmp_path):
    path = tmp_path / "i16.json"
    code, out, _ = run(capsys, "--format", "structured", "iterate", "--seeds", "n4_abelian",
                       "--target-dim", "16", "-o", str(path))
    assert code == 0 and json.loads(out)["dim"] == 16
    assert read_algebra(path).dim == 16
    code, _, err = run(capsys, "iterate", "--seeds", "n4_abelian", "--target-dim", "12")
    assert code == 2 and "reachable" in err


def test_split(capsys, tmp_path):
    path = tmp_path / "c12.json"
    run(capsys, "compose", "n4_abelian", "n6_abelian", "-o", str(path))
    code, out, _ = run(capsys, "--format", "structured", "split", str(path), "--complement", "11,12")
    assert code == 0
    rep = json.loads(out)
    assert rep["invariants"]["ok"] and rep["reassembles"]
    assert rep["X"] == ["0", "0", "0", "1", "0", "0", "0", "0", "0", "1"]
    code, _, _ = run(capsys, "split", str(path), "--complement", "1,3")
    assert code == 2
    with pytest.raises(SystemExit):
        main(["split", str(path), "--complement", "x"])


def test_search_reports_are_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        code, _, _ = run(capsys, "--format", "structured", "search", "n4_abelian", "--starts", "3",
                         "--seed", "11", "--report", str(p))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["config"]["rng_seed"] == 11 and rep["converged"]


def test_search_negative_exit_code(capsys, tmp_path):
    from helpers import three_step_control
    from sktnil.fileio import write_algebra
    path = tmp_path / "ctl.json"
    write_algebra(three_step_control(), path)
    code, out, _ = run(capsys, "search", str(path), "--starts", "2")
    assert code == 1 and "evidence, not a proof" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sktnil", "catalog", "list"], capture_output=True, text=True)
    assert proc.returncode == 0 and "n12_nonabelian" in proc.stdout
