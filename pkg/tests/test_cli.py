import subprocess
import sys

import pytest

from alexandroff.cli import EXAMPLES, GOLDEN, MALFORMED, main, run_capture
from alexandroff import models


@pytest.mark.parametrize("argv,expected", GOLDEN, ids=[" ".join(a) for a, _ in GOLDEN])
def test_golden(argv, expected):
    code, text = run_capture(argv)
    assert code == 0, text
    lines = text.splitlines()
    for line in expected:
        assert line in lines
    assert run_capture(argv) == (code, text)


@pytest.mark.parametrize("argv,want", MALFORMED, ids=[" ".join(a) for a, _ in MALFORMED])
def test_malformed(argv, want):
    code, text = run_capture(argv)
    assert code == want, text


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_examples_run(name):
    code, text = run_capture(["examples", "run", name])
    assert code == 0, text


def test_examples_write_and_read_back(tmp_path):
    code, _ = run_capture(["examples", "write", str(tmp_path)])
    assert code == 0
    assert {p.name for p in tmp_path.iterdir()} == set(models.FIXTURES)
    code, text = run_capture(["homology", "--space", str(tmp_path / "circle4.poset"), "--method", "nerve"])
    assert code == 0 and "H_1 = Z" in text
    code, text = run_capture(["mv", "--space", str(tmp_path / "sphere6.poset"), "--u0", "cone0", "--u1", "cone1"])
    assert code == 0 and "exact: yes" in text


def test_tsv_output():
    code, text = run_capture(["homology", "--space", "circle4.poset", "--format", "tsv", "--ring", "F2"])
    assert code == 0
    assert text.splitlines() == ["degree\tfree_rank\ttorsion", "0\t1\t", "1\t1\t"]


def test_torsion_free_field_output():
    code, text = run_capture(["homology", "--space", "sphere6.poset", "--ring", "Q"])
    assert text.splitlines() == ["dim H_0 = 1", "dim H_1 = 0", "dim H_2 = 1"]


def test_cech_variants_on_two_arcs():
    # two contractible opens meeting in two points
    for variant in ("large", "reduced"):
        code, text = run_capture(["cech", "--space", "circle4.poset", "--cover", "circle4.cover", "--variant", variant])
        assert code == 0
        assert "H_0 = Z" in text and "H_1 = Z" in text


def test_compare_needs_two_methods():
    code, _ = run_capture(["homology", "--space", "circle4.poset", "--compare", "bar"])
    assert code == 2


def test_nerve_method_rejects_nonconstant(tmp_path):
    p = tmp_path / "doubled.diagram"
    p.write_text(models.fixture_text("circle4_constant.diagram").replace("matrix 0 1: [[1]]", "matrix 0 1: [[2]]"))
    code, text = run_capture(["homology", "--space", "circle4.poset", "--diagram", str(p), "--method", "nerve"])
    assert code == 2
    code, text = run_capture(["homology", "--space", "circle4.poset", "--diagram", str(p)])
    # monodromy 2 around the circle: H_0 = Z/(2-1) = 0
    assert code == 0 and text.splitlines() == ["H_0 = 0", "H_1 = 0"]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "alexandroff", "tower", "hawaiian", "--k", "0", "--levels", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert "level 1: rank 2" in r.stdout


def test_check_verb():
    code, text = run_capture(["check", "finspace"])
    assert code == 0 and text.startswith("PASS")
