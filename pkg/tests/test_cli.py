import io

import pytest

from graphknots.cli import ParseError, parse_expr, run
from graphknots.expr import Cable, Sum, U


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_parse_expr():
    assert parse_expr(" sum( cable(2,3,U), cable(-2,5,U) )") == Sum(Cable(2, 3, U), Cable(-2, 5, U))


@pytest.mark.parametrize("text, line, column", [
    ("cable(2,3)", 1, 10),
    ("sum(U)", 1, 6),
    ("U U", 1, 3),
    ("sum(U,\n  X)", 2, 3),
])
def test_parse_error_position(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_normalize():
    assert call("normalize", "-e", "cable(1,5,U)") == (0, "U\n", "")
    assert call("normalize", "-e", "sum(cable(2,5,U),U,cable(-2,-3,U))")[1] == \
        "sum(cable(2,3,U),cable(2,5,U))\n"


def test_invariants_and_level():
    code, out, _ = call("invariants", "-e", "cable(2,3,U)")
    assert code == 0
    assert out.splitlines() == ["alexander 1 - 1*t + 1*t^2", "genus 1"]
    assert call("level", "-e", "sum(cable(2,3,U),cable(2,5,U))")[1] == "2\n"


def test_kit():
    code, out, _ = call("kit", "-e", "sum(cable(2,3,U),cable(2,5,U))")
    assert code == 0
    assert out.splitlines() == [
        "P1 cable(2,3,U)", "P2 cable(2,5,U)", "P3 U", "P4 U",
        "gamma K: P1 P2", "gamma P1: P3", "gamma P2: P4"]


def test_exit_codes():
    assert call("normalize", "-e", "cable(2,4,U)")[0] == 1
    assert call("normalize", "-e", "cable(2,")[0] == 2
    assert call("frobnicate")[0] == 2


def test_build_validate_extract(tmp_path):
    path = tmp_path / "k.rhd"
    assert call("build", "-e", "sum(cable(2,3,U),cable(2,5,U))", "-o", str(path))[0] == 0
    assert call("validate", str(path)) == (0, "ok\n", "")
    code, out, _ = call("extract", str(path), "-k", "s0")
    assert code == 0
    assert out.splitlines()[0] == "knot s0 sum(cable(2,3,U),cable(2,5,U))"
    assert any(line.startswith("witness s0 ") for line in out.splitlines())


def test_validate_reports_violations(tmp_path):
    path = tmp_path / "bad.rhd"
    path.write_text("source s0 split\nsink k0 s0\nsaddle h0 s0:disk s0:disk\n")
    code, out, _ = call("validate", str(path))
    assert code == 1
    assert [line.split()[0] for line in out.splitlines()] == ["SphereProduced", "OrderingViolation"]


def test_classify(tmp_path):
    path = tmp_path / "u.rhd"
    call("build", "-e", "U", "-o", str(path))
    assert call("classify", str(path), "s0", "k0") == (0, "HopfLink\n", "")


def test_missing_file():
    assert call("validate", "/nonexistent/x.rhd")[0] == 2


def test_enumerate_small():
    code, out, _ = call("enumerate", "--max-saddles", "0", "--no-prune")
    assert code == 0
    lines = out.splitlines()
    assert "accepted 1" in lines
