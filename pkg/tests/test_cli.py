import json
import subprocess
import sys

import numpy as np
import pytest

from bjclass.blockalg import Algebra, Element
from bjclass.cli import main
from bjclass.formats import dump_element


@pytest.fixture
def files(tmp_path):
    alg = Algebra.parse("field=R; R + M2(R)")
    a = Element(alg, (np.array([[5.0]]), np.zeros((2, 2))))
    b = Element(alg, (np.array([[0.0]]), np.eye(2)))
    pa, pb = tmp_path / "a.json", tmp_path / "b.json"
    dump_element(a, pa)
    dump_element(b, pb)
    return str(alg), str(pa), str(pb)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_orth_json(capsys, files):
    alg, pa, pb = files
    code, out, _ = run(capsys, "orth", "--algebra", alg, "--a", pa, "--b", pb, "--oracle", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["orthogonal"] is True and data["oracle"] is True
    assert data["witness"]["x"]


def test_symmetry_modes_agree(capsys, files):
    alg, pa, _ = files
    code, out, _ = run(capsys, "--seed", "4", "symmetry", "--algebra", alg, "--element", pa, "--json")
    data = json.loads(out)
    assert code == 0 and data["agree"]
    assert (data["structural"]["left"], data["structural"]["right"], data["structural"]["smooth"]) == (True, False, True)


def test_classify_table(capsys):
    code, out, _ = run(capsys, "classify", "--algebra", "field=R; R + R + C + H")
    assert code == 0
    assert "matches_structural  True" in out


def test_compare_exit_codes(capsys):
    assert run(capsys, "compare", "--a", "field=R; R", "--b", "field=C; C")[0] == 0
    code, out, _ = run(capsys, "compare", "--a", "field=R; R + C", "--b", "field=C; C", "--json")
    assert code == 1 and json.loads(out)["equal"] is False


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "classify", "--algebra", "field=C; M2(H)")
    assert code == 2
    assert "^" in err


def test_bad_tolerance_and_missing_file(capsys, files):
    alg, pa, _ = files
    assert run(capsys, "--tol", "-1", "classify", "--algebra", alg)[0] == 2
    assert run(capsys, "orth", "--algebra", alg, "--a", pa, "--b", "/nonexistent.json")[0] == 2


def test_verify_is_deterministic(capsys):
    first = run(capsys, "verify", "neighborhoods", "--trials", "1", "--seed", "9", "--json")
    second = run(capsys, "verify", "neighborhoods", "--trials", "1", "--seed", "9", "--json")
    assert first[0] == 0
    assert first[1] == second[1]
    assert json.loads(first[1])["passed"] is True


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "bjclass", "compare", "--a", "field=R; C", "--b", "field=R; C"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "equal" in res.stdout
