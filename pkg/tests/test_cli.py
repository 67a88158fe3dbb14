import json
import subprocess
import sys
from pathlib import Path

import pytest

from qtembed.cli import EXIT_FAILED, EXIT_INPUT, EXIT_OK, main
from qtembed.config import get_settings
from qtembed.document import load_document

from .test_momentangle import K5_EQUATIONS

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

NON_TORIC_SQUARE = """\
name: twisted
n: 2
m: 4
A: [[1, 0], [0, 1], [-1, 0], [0, -1]]
b: [0, 0, 1, 1]
Lambda: [[1, 0, 1, 0], [0, 1, 1, 1]]
"""


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_validate(capsys):
    code, out = run(capsys, "validate", DATA / "k5.txt")
    assert code == EXIT_OK
    assert out.startswith("K5: PASS")


def test_validate_reports_bad_lambda(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text(NON_TORIC_SQUARE.replace("[1, 0, 1, 0]", "[2, 0, 1, 0]"))
    code, out = run(capsys, "validate", path)
    assert code == EXIT_FAILED
    assert "FAIL" in out


def test_validate_zero_denominator_is_an_input_error(capsys, tmp_path):
    path = tmp_path / "zero.txt"
    path.write_text(NON_TORIC_SQUARE.replace("b: [0, 0, 1, 1]", 'b: [0, 0, "1/0", 1]'))
    code, out = run(capsys, "validate", path)
    assert code == EXIT_INPUT
    assert out == ""


def test_faces_json(capsys):
    code, out = run(capsys, "faces", "--json", DATA / "k5.txt")
    assert code == EXIT_OK
    faces = json.loads(out)
    assert (faces["f0"], faces["f1"], faces["m"]) == (14, 21, 9)


def test_quadrics(capsys):
    code, out = run(capsys, "quadrics", DATA / "k5.txt")
    assert code == EXIT_OK
    assert set(out.splitlines()) == K5_EQUATIONS


def _monomial_lines(out):
    return [line for line in out.splitlines() if "\t" in line]


def test_embed_affine(capsys):
    code, out = run(capsys, "embed", DATA / "k5.txt", "--character", "trivial")
    assert code == EXIT_OK
    assert "target: R^3 x C^6" in out
    assert len(_monomial_lines(out)) == 6


def test_embed_projective_uses_document_character(capsys):
    code, out = run(capsys, "embed", DATA / "k5.txt")
    assert code == EXIT_OK
    assert "target: P x CP^31" in out
    assert len(_monomial_lines(out)) == 32


def test_embed_rejects_bad_character(capsys):
    code, _ = run(capsys, "embed", DATA / "k5.txt", "--character", "1,2")
    assert code == EXIT_INPUT


def test_toric(capsys, tmp_path):
    code, out = run(capsys, "toric", DATA / "square.txt")
    assert code == EXIT_OK
    assert "toric: PASS" in out

    path = tmp_path / "twisted.txt"
    path.write_text(NON_TORIC_SQUARE)
    code, out = run(capsys, "toric", path)
    assert code == EXIT_FAILED
    assert "no unimodular B" in out


def test_verify(capsys):
    code, out = run(
        capsys, "verify", DATA / "simplex2.txt", "--seed", 1, "--samples", 20
    )
    assert code == EXIT_OK
    assert out.startswith("simplex2: PASS")


def test_verify_json_is_reproducible(capsys):
    argv = ["verify", "--json", DATA / "cube.txt", "--seed", 5, "--samples", 10]
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert json.loads(first) == json.loads(second)


def test_verify_needs_seed_in_ci(capsys, monkeypatch):
    monkeypatch.setenv("QTEMBED_CI", "1")
    get_settings.cache_clear()
    code, _ = run(capsys, "verify", DATA / "simplex2.txt", "--samples", 5)
    assert code == EXIT_INPUT
    code, _ = run(capsys, "verify", DATA / "simplex2.txt", "--samples", 5, "--seed", 3)
    assert code == EXIT_OK


def test_verify_rejects_bad_tolerances(capsys):
    code, _ = run(
        capsys, "verify", DATA / "simplex2.txt", "--seed", 1, "--tol", "1e-3"
    )
    assert code == EXIT_INPUT


def test_cut(capsys, tmp_path):
    output = tmp_path / "cut.txt"
    code, out = run(
        capsys,
        "cut",
        DATA / "cube.txt",
        "--face",
        "1,2",
        "--eps",
        "1/2",
        "--output",
        output,
    )
    assert code == EXIT_OK
    assert out.splitlines()[0] == "# f0=10 f1=15 m=7"
    doc = load_document(output)
    assert doc.m == 7
    assert doc.b[-1] == "-1/2"
    assert doc.Lambda[0][-1] == 1 and doc.Lambda[1][-1] == 1


@pytest.mark.parametrize(
    "face,eps,expected",
    [
        ("1", "1/2", EXIT_INPUT),
        ("1,x", "1/2", EXIT_INPUT),
        ("1,2", "1/0", EXIT_INPUT),
        ("1,4", "1/2", EXIT_FAILED),
    ],
)
def test_cut_errors(capsys, face, eps, expected):
    code, _ = run(capsys, "cut", DATA / "cube.txt", "--face", face, "--eps", eps)
    assert code == expected


def test_missing_file(capsys):
    code = main(["faces", str(DATA / "missing.txt")])
    assert code == EXIT_INPUT
    assert "input_error" in capsys.readouterr().err


def test_module_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "qtembed", "faces", "--json", DATA / "simplex3.txt"],
        capture_output=True,
        text=True,
        cwd=ROOT,
        check=False,
    )
    assert result.returncode == 0, result.stderr
    assert json.loads(result.stdout)["f0"] == 4


def test_check_documents_script():
    result = subprocess.run(
        [sys.executable, ROOT / "scripts" / "check_documents.py"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert result.returncode == 0, result.stdout
    assert "0 document(s) failed" in result.stdout


def test_toric_reports_signed_character(capsys, tmp_path):
    path = tmp_path / "flipped.txt"
    flipped = "Lambda: [[1, 0, 1, 0], [0, 1, 0, -1]]"
    twisted = "Lambda: [[1, 0, 1, 0], [0, 1, 1, 1]]"
    path.write_text(NON_TORIC_SQUARE.replace(twisted, flipped))
    code, out = run(capsys, "toric", "--json", path)
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["D"] == [1, 1, -1, 1]
    assert report["k_embedding"] != report["k_tilde"]
    assert report["q"] == 4
