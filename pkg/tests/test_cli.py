import io
import subprocess
import sys

import pytest

from delzant.cli import parse_generator_spec, run
from delzant.families import FamilySpec
from delzant.polygon import gen_hirzebruch, read_polygon


def call(*argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def fields(text):
    return dict(line.split(" = ", 1) for line in text.splitlines() if " = " in line)


def test_gen_piped_into_action_end_to_end():
    gen = subprocess.run([sys.executable, "-m", "delzant", "gen", "hirzebruch", "1", "1"],
                         capture_output=True, text=True, check=True)
    act = subprocess.run([sys.executable, "-m", "delzant", "action"], input=gen.stdout,
                         capture_output=True, text=True)
    assert act.returncode == 0
    assert "action = 111/13" in act.stdout.splitlines()


def test_validate_reports_defective_corner(monkeypatch):
    code, out, err = call("validate", stdin="0 0\n1 0\n0 2\n", monkeypatch=monkeypatch)
    assert code == 1
    assert "vertex (1, 0)" in out and "corner determinant 2" in out
    assert "not Delzant" in err


def test_validate_ok():
    code, out, _ = call("validate", "twopoint", "1", "2")
    assert code == 0 and out.startswith("ok")


def test_measure_unit_triangle(monkeypatch):
    code, out, _ = call("measure", stdin="0 0\n1 0\n0 1\n", monkeypatch=monkeypatch)
    f = fields(out)
    assert code == 0
    assert f["area"] == "1/2" and f["perimeter"] == "3"
    assert f["interior_barycenter"] == "(1/3, 1/3)"
    assert f["boundary_barycenter"] == "(1/3, 1/3)"
    assert f["d"] == "(0, 0)"
    assert f["inertia"] == "[[1/36, -1/72], [-1/72, 1/36]]"


def test_measure_csv_header():
    code, out, _ = call("measure", "--csv", "cp2", "1")
    header, row = out.splitlines()
    assert header == "area,perimeter,xbar1,xbar2,bx1,bx2,d1,d2,pi11,pi12,pi22"
    assert row.split(",")[:2] == ["1/2", "3"]


def test_action_csv_has_bound_columns():
    code, out, _ = call("action", "--csv", "hirzebruch", "1", "1")
    header, row = out.splitlines()
    cols = dict(zip(header.split(","), row.split(",")))
    assert code == 0
    assert cols["action"] == "111/13"
    assert cols["weyl_coeff"] == "296/13"


def test_futaki_and_topology():
    _, out, _ = call("futaki", "hirzebruch", "1", "1")
    f = fields(out)
    assert f["futaki"] == f["futaki_per_edge"] == "((-4/9)*pi, (8/9)*pi)"
    _, out, _ = call("topology", "twopoint", "1", "1")
    assert fields(out) == {"euler": "5", "signature": "-1", "b2": "3"}


def test_generator_rejects_zero_size():
    code, _, err = call("gen", "cp2", "0")
    assert code == 1 and "error" in err


def test_generator_accepts_rational_parameters():
    code, out, _ = call("gen", "hirzebruch", "1", "3/2")
    assert code == 0
    assert out == "0 0\n5/2 0\n3/2 1\n0 1\n"
    assert read_polygon(out) == gen_hirzebruch(1, 3 / 2)


@pytest.mark.parametrize("argv", [
    ["measure", "--bogus", "cp2", "1"],
    ["frobnicate"],
    ["gen", "cp2"],
    ["gen", "hirzebruch", "1", "x/2"],
    ["scan", "hirzebruch", "1"],
    ["minimize", "hirzebruch", "1", "--bracket", "1"],
])
def test_usage_errors_exit_two(argv):
    code, _, _ = call(*argv)
    assert code == 2


def test_missing_file_is_a_usage_error(tmp_path):
    code, _, err = call("measure", str(tmp_path / "absent.txt"))
    assert code == 2 and "cannot read" in err


def test_output_is_byte_identical_across_runs():
    outs = {call("action", "twopoint", "2/3", "5")[1] for _ in range(3)}
    assert len(outs) == 1


def test_write_read_write_round_trip(tmp_path):
    path = tmp_path / "p.txt"
    assert call("gen", "twopoint", "1/2", "3", "-o", str(path))[0] == 0
    first = path.read_text()
    code, second, _ = call("gen", "file", str(path))
    assert code == 0 and second == first
    assert call("gen", str(path))[1] == first


def test_blowup_command():
    code, out, _ = call("blowup", "0", "1/2", "cp2", "2")
    assert code == 0
    assert len(read_polygon(out)) == 4
    code, _, err = call("blowup", "0", "2", "cp2", "2")
    assert code == 1


def test_scan_output():
    code, out, _ = call("scan", "hirzebruch", "1", "--grid", "1:3:3")
    lines = out.splitlines()
    assert lines[0] == "p1,action,action_float"
    assert lines[1].startswith("1,111/13,")
    assert len(lines) == 4


def test_scan_two_dimensional_grid():
    code, out, _ = call("scan", "twopoint", "--grid", "1:2:2;1:1:1")
    assert code == 0
    assert out.splitlines()[1].startswith("1,1,2919/409,")


def test_minimize_output():
    code, out, _ = call("minimize", "hirzebruch", "1")
    f = fields(out)
    assert code == 0
    assert f["classification"] == "interior_min"
    assert float(f["params"]) == pytest.approx(0.4578894, abs=1e-6)
    assert "Bach-flat candidate" in f["note"]


def test_parse_generator_spec():
    assert parse_generator_spec("hirzebruch 2 1") == gen_hirzebruch(2, 1)
    assert isinstance(parse_generator_spec("hirzebruch 2"), FamilySpec)
    assert parse_generator_spec(["symtwopoint"]).dimension == 1
    assert parse_generator_spec("twopoint").dimension == 2


def test_decimal_parameters_are_read_exactly():
    assert call("gen", "hirzebruch", "1", "1.5")[1] == call("gen", "hirzebruch", "1", "3/2")[1]
