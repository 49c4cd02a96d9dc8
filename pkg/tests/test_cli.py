import csv
import subprocess
import sys

import pytest

from bbfem.cli import REFERENCE_DOF_TABLE, main, matching_degree_set


def _rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_verify_default_passes(tmp_path):
    out = tmp_path / "verify.csv"
    assert main(["--experiment", "verify", "--out", str(out)]) == 0
    rows = _rows(out)
    assert rows and all(r["pass"] == "true" for r in rows)
    assert list(rows[0]) == ["claim", "residual", "pass"]


def test_verify_fault_exit_status(tmp_path):
    out = tmp_path / "verify.csv"
    assert main(["--experiment", "verify", "--degree-max", "2", "--inject-chi-fault", "2",
                 "--out", str(out)]) == 1
    failed = {r["claim"] for r in _rows(out) if r["pass"] == "false"}
    assert "face function normal trace is 1/(2 area)" in failed


@pytest.mark.parametrize("argv", [
    ["--experiment", "nope"],
    ["--experiment", "cavity", "--degree-min", "4", "--degree-max", "2"],
    ["--experiment", "cavity", "--zero-tol", "3"],
    ["--experiment", "mixed-poisson", "--mesh-m", "0"],
    ["--experiment", "verify", "--degree-max", "7"],
    ["--experiment", "verify", "--inject-chi-fault", "9"],
    ["--experiment", "mixed-poisson", "--degrees", "-1"],
])
def test_configuration_errors(argv):
    assert main(argv) == 2


def test_unwritable_output():
    assert main(["--experiment", "verify", "--out", "/nonexistent/dir/x.csv"]) == 2


def test_cavity_csv(tmp_path):
    out = tmp_path / "cavity.csv"
    assert main(["--experiment", "cavity", "--degree-min", "1", "--degree-max", "2", "--out", str(out)]) == 0
    rows = _rows(out)
    assert list(rows[0]) == ["degree", "eig_index", "computed", "exact", "abs_error"]
    assert len(rows) == 22
    assert [float(r["exact"]) for r in rows[:11]] == [2] * 3 + [3] * 2 + [5] * 6


def test_mixed_poisson_csv_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["--experiment", "mixed-poisson", "--degree-max", "3", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = _rows(a)
    assert [(int(r["K_c"]), int(r["K_o"])) for r in rows] == [(24, 24), (60, 96), (114, 240), (186, 480)]


def test_modified_counts_and_degree_set(tmp_path, capsys):
    out = tmp_path / "mod.csv"
    assert main(["--experiment", "modified-mixed-poisson", "--degrees", "1", "2", "3",
                 "--mesh-m", "2", "--max-solve-dofs", "1500", "--out", str(out)]) == 0
    err = capsys.readouterr().err
    assert "degree set {1,3,5}: matches the reference" in err
    assert "degree set {1,2,3}: does not match" in err
    rows = _rows(out)
    first = {(r["degree"], r["method"]): r for r in rows}
    assert (first[("1", "full")]["N_g"], first[("1", "full")]["N_l"], first[("1", "reduced")]["N_l"]) == \
        ("408", "288", "0")
    assert first[("1", "full")]["err_u"] == first[("1", "reduced")]["err_u"]
    assert first[("3", "full")]["err_u"] != "nan"


def test_degree_set_logic():
    rows = {(48, 1): (408, 0, 288), (48, 3): (1248, 528, 2352), (48, 5): (2568, 2400, 7680)}
    assert matching_degree_set(rows) == {"1,2,3": False, "1,3,5": True}
    assert matching_degree_set({}) == {"1,2,3": False, "1,3,5": False}
    assert len(REFERENCE_DOF_TABLE) == 5


def test_console_entry_point(tmp_path):
    out = tmp_path / "v.csv"
    proc = subprocess.run([sys.executable, "-m", "bbfem.cli", "--experiment", "verify", "--degree-max", "1",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "claims passed" in proc.stderr
