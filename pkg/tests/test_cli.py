import json
import subprocess
import sys
from importlib.resources import files

import pytest

from sbdet.cli.main import SCHEMA, main, run
from sbdet.cli.session import SessionIo, parse_session, parse_session_text
from sbdet.errors import SessionSyntaxError, UnknownName

FIXTURES = files("sbdet") / "fixtures"
EXAMPLE = str(FIXTURES / "example_bsy.session")
TWO_CLASS = str(FIXTURES / "two_class_uw.session")


def _run(*argv):
    code, data, _ = run(list(argv))
    return code, data


# -- session files --------------------------------------------------------------------


def test_example_session():
    s = parse_session(EXAMPLE)
    assert "A1" in s.matrices and s.matrix_sides["A1"] == "S"
    assert s.ctx.xi == s.tower.parse("v")
    assert s.registry.q.label == "q"
    assert set(s.words) == {"Bpq", "twist", "mixed"}


def test_unknown_name_has_position():
    text = "tower:\n  variables: [u]\nxi: t^3\n"
    with pytest.raises(UnknownName) as exc:
        parse_session_text(text)
    assert (exc.value.line, exc.value.col) == (3, 5)


def test_empty_file():
    with pytest.raises(SessionSyntaxError) as exc:
        parse_session_text("")
    assert exc.value.line == 1


@pytest.mark.parametrize(
    "text, line",
    [
        ("tower: [1, 2\n", 2),
        ("tower:\n  variables: [u]\n  layers:\n    - {name: t, radicand: u}\nxi: u +* 2\n", 5),
        ("tower:\n  variables: [u]\nbogus: 1\n", 3),
        ("tower:\n  variables: [u]\n  layers:\n    - {name: t, radicand: u}\nxi: 2\nmatrices:\n  A: {rows: [[1, 0], [0, 1]]}\n", 7),
    ],
)
def test_syntax_errors_carry_lines(text, line):
    with pytest.raises(SessionSyntaxError) as exc:
        parse_session_text(text)
    assert exc.value.line == line


def test_word_errors_point_into_block():
    text = (
        "tower:\n  variables: [u, v]\n  layers:\n    - {name: t, radicand: u}\nxi: v\n"
        "classes:\n  - {label: q, kind: three, distinguished: true}\n"
        "words:\n  W: |\n    link q fwd\n    link q sideways\n"
    )
    with pytest.raises(SessionSyntaxError) as exc:
        parse_session_text(text)
    assert exc.value.line == 11


def test_missing_file():
    with pytest.raises(SessionIo):
        parse_session("/nonexistent/x.session")


# -- commands -------------------------------------------------------------------------


def test_verify_example():
    code, data = _run("verify-example", "--session", EXAMPLE)
    assert code == 0
    assert data["schema"] == SCHEMA
    assert data["checks"]["one_class_relation: det ratio = 1"]
    assert data["checks"]["one_class_relation: composition = identity"]
    assert data["results"]["det ratio"] == "1"


def test_relation_two_class():
    code, data = _run("relation-two-class", "--session", TWO_CLASS, "--b", "w*t^2*s")
    assert code == 0
    ledger = [k for k in data["checks"] if k.startswith("two_class_ledger")]
    assert len(ledger) >= 6 and all(data["checks"][k] for k in ledger)


def test_relation_two_class_bad_b():
    code, data = _run("relation-two-class", "--session", TWO_CLASS, "--b", "s")
    assert code == 1
    assert data["errors"][0]["type"] == "NormMismatch"


def test_det_class():
    code, data = _run("det-class", "--session", EXAMPLE, "--matrix", "A1")
    assert code == 0
    c = data["results"]["class"]
    assert c["cube"] in ("cube", "no") and c["representative"]


def test_det_class_non_representant_fails():
    code, data = _run("det-class", "--session", EXAMPLE, "--matrix", "A1", "--side", "S_op")
    assert code == 1


def test_compose():
    code, data = _run("compose", "--session", EXAMPLE, "--maps", "A1,Sigma")
    assert code == 0 and data["results"]["degree"] == 2


def test_word_commands():
    code, data = _run("phi", "--session", EXAMPLE, "--word", "Bpq")
    assert code == 0 and data["results"]["phi"]["z3"] == {"p": 2, "r": 0}
    code, data = _run("normal-form", "--session", EXAMPLE, "--word", "mixed")
    assert code == 0
    code, data = _run("subgroup-member", "--session", EXAMPLE, "--word", "Bpq", "--class", "r")
    assert code == 0 and data["results"]["member"] is True
    code, data = _run("subgroup-member", "--session", EXAMPLE, "--word", "Bpq", "--class", "h", "--prime", "7")
    assert code == 0 and data["results"]["coordinate"] == 0


def test_usage_errors_exit_2(capsys):
    assert _run("det-class", "--session", EXAMPLE)[0] == 2
    assert _run("phi", "--session", EXAMPLE)[0] == 2  # several words, none chosen
    assert _run("det-class", "--session", EXAMPLE, "--matrix", "nope")[0] == 2
    assert _run("phi", "--session", "/nonexistent")[0] == 2
    assert _run("phi", "--session", EXAMPLE, "--samples", "0")[0] == 2
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate", "--session", EXAMPLE])
    assert exc.value.code == 2


def test_reports_are_deterministic():
    a = _run("verify-example", "--session", EXAMPLE, "--seed", "3")[1]
    b = _run("verify-example", "--session", EXAMPLE, "--seed", "3")[1]
    a.pop("timings"), b.pop("timings")
    assert a == b


def test_json_on_stdout_summary_on_stderr(capsys):
    assert main(["phi", "--session", EXAMPLE, "--word", "Bpq", "--json"]) == 0
    out, err = capsys.readouterr()
    assert json.loads(out)["passed"] is True
    assert "PASS" in err


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "sbdet.cli.main", "phi", "--session", EXAMPLE, "--word", "twist", "--json"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["results"]["phi"]["det"]["cube"] == "no"
