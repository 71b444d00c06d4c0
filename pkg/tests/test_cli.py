"""End-to-end checks of the command line against the shipped problem files."""

import json
import subprocess
from pathlib import Path

import pytest

from orbitcalc import cli
from orbitcalc.algebra import PolyRing, parse_polynomial
from orbitcalc.exterior import form_from_json, vf_from_json
from orbitcalc.quotient import push_vf

FIXTURES = Path(cli.__file__).parent / "fixtures"
Z2 = str(FIXTURES / "z2.json")
S2 = str(FIXTURES / "s2.json")
TRIVIAL = str(FIXTURES / "trivial.json")
SO2 = str(FIXTURES / "so2_semibasic.json")
THETA1 = str(FIXTURES / "theta1.json")
THETA4 = str(FIXTURES / "theta4.json")


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert err == ""
    return code, json.loads(out)


# ---------------------------------------------------------------------------
# structure listings
# ---------------------------------------------------------------------------

def test_invariants_listing(capsys):
    code, out, _ = run(capsys, "invariants", "-i", Z2)
    assert code == 0
    assert out.splitlines() == ["x1^2", "x1*x2", "x2^2"]
    code, out, _ = run(capsys, "invariants", "-i", TRIVIAL)
    assert (code, out.splitlines()) == (0, ["x1", "x2"])
    code, out, _ = run(capsys, "invariants", "-i", S2)
    assert (code, out.splitlines()) == (0, ["x1 + x2", "x1^2 + x2^2"])


def test_invariants_degree_bound_override(capsys):
    code, out, _ = run(capsys, "invariants", "-i", Z2, "--degree-bound", "2")
    assert code == 0
    assert out.splitlines() == ["x1^2", "x1*x2", "x2^2"]


def test_relations_listing(capsys):
    code, out, _ = run(capsys, "relations", "-i", Z2)
    assert (code, out.strip()) == (0, "y2^2 - y1*y3")
    code, out, _ = run(capsys, "relations", "-i", TRIVIAL)
    assert (code, out.strip()) == (0, "(zero ideal)")
    code, payload = run_json(capsys, "relations", "-i", Z2)
    assert payload == {"relations": ["y2^2 - y1*y3"]}


def test_equivariants_listing(capsys):
    code, out, _ = run(capsys, "equivariants", "-i", Z2)
    assert code == 0
    assert out.splitlines() == [
        "(x1)*d/dx1",
        "(x1)*d/dx2",
        "(x2)*d/dx1",
        "(x2)*d/dx2",
    ]
    code, payload = run_json(capsys, "equivariants", "-i", TRIVIAL)
    assert payload == {
        "equivariants": [{"components": ["1", "0"]}, {"components": ["0", "1"]}]
    }


# ---------------------------------------------------------------------------
# vector fields
# ---------------------------------------------------------------------------

def test_push_vf(capsys):
    code, out, _ = run(capsys, "push-vf", "X1", "-i", Z2)
    assert (code, out.strip()) == (0, "(2*y1)*d/dy1 + (y2)*d/dy2")
    code, payload = run_json(capsys, "push-vf", "x1,x2", "-i", Z2)
    assert code == 0
    assert payload["orbit_vector_field"] == {"components": ["2*y1", "2*y2", "2*y3"]}


def test_push_vf_swap_example(capsys):
    code, out, _ = run(capsys, "push-vf", "sym_field", "-i", S2)
    assert (code, out.strip()) == (0, "(y1)*d/dy1 + (2*y1^2 - 2*y2)*d/dy2")


def test_push_vf_rejects_non_invariant(capsys):
    code, _, err = run(capsys, "push-vf", "1,0", "-i", Z2)
    assert code == 2
    assert "not invariant" in err


def test_lift_vf_round_trip(capsys):
    code, payload = run_json(capsys, "lift-vf", "2*y1,y2,0", "-i", Z2)
    assert code == 0
    problem = cli.load_problem(Z2)
    space = cli.Context(problem, cap=100_000).space
    lifted = vf_from_json(payload["vector_field"], PolyRing.ambient(2))
    assert push_vf(lifted, space) == space.field(
        [parse_polynomial(s, space.orbit_ring) for s in ("2*y1", "y2", "0")]
    )


def test_bracket(capsys):
    code, out, _ = run(capsys, "bracket", "2*y1,y2,0", "2*y2,y3,0", "-i", Z2)
    assert (code, out.strip()) == (0, "(-2*y2)*d/dy1 + (-y3)*d/dy2")
    code, out, _ = run(capsys, "bracket", "2*y1,y2,0", "2*y1,y2,0", "-i", Z2)
    assert (code, out.strip()) == (0, "0")


# ---------------------------------------------------------------------------
# forms up and down
# ---------------------------------------------------------------------------

def test_push_form_golden(capsys):
    code, out, _ = run(capsys, "push-form", "w1", "-i", Z2)
    assert code == 0
    assert out.splitlines() == [
        "degree 1 on 4 generators",
        "(1) -> 2*y1",
        "(3) -> 2*y2",
    ]
    code, payload = run_json(capsys, "push-form", "w4", "-i", Z2)
    assert code == 0
    with open(THETA4, encoding="utf-8") as handle:
        assert payload["orbit_form"] == json.load(handle)


def test_push_form_trivial_group(capsys):
    code, out, _ = run(capsys, "push-form", "w", "-i", TRIVIAL)
    assert code == 0
    assert out.splitlines() == ["degree 1 on 2 generators", "(2) -> y1"]


def test_pull_form_inverts_push(capsys):
    code, payload = run_json(capsys, "pull-form", THETA4, "-i", Z2)
    assert code == 0
    problem = cli.load_problem(Z2)
    recovered = form_from_json(payload["form"], PolyRing.ambient(2))
    assert recovered == problem.named_objects["w4"]


def test_d_command(capsys):
    code, out, _ = run(capsys, "d", "w4", "-i", Z2)
    assert (code, out.strip()) == (0, "(2) dx1^dx2")
    code, _, err = run(capsys, "d", "X1", "-i", Z2)
    assert code == 2
    assert "is a vector field, not a form" in err


def test_orbit_d(capsys):
    code, payload = run_json(capsys, "orbit-d", THETA4, "-i", Z2)
    assert code == 0
    assert payload["orbit_form"]["values"] == [
        {"tuple": [1, 2], "class": "2*y1"},
        {"tuple": [1, 4], "class": "2*y2"},
        {"tuple": [2, 3], "class": "-2*y2"},
        {"tuple": [3, 4], "class": "2*y3"},
    ]
    code, out, _ = run(capsys, "orbit-d", THETA1, "-i", Z2)
    assert code == 0
    assert out.splitlines() == ["degree 2 on 4 generators", "(zero)"]


# ---------------------------------------------------------------------------
# decision commands (exit code 1 carries the mathematical negative)
# ---------------------------------------------------------------------------

def test_semibasic(capsys):
    code, out, _ = run(capsys, "semibasic", "w4", "-i", Z2)
    assert (code, out.strip()) == (0, "SEMI-BASIC")
    code, out, _ = run(capsys, "semibasic", "radial", "-i", SO2)
    assert (code, out.strip()) == (0, "SEMI-BASIC")
    code, out, _ = run(capsys, "semibasic", "rotational_r2", "-i", SO2)
    assert code == 1
    assert out.startswith("NOT SEMI-BASIC (generator 1")
    code, payload = run_json(capsys, "semibasic", "rotational_r2", "-i", SO2)
    assert code == 1
    assert payload["failing_index"] == 0
    assert payload["contraction"]["terms"][0]["coeff"] == "x1^4 + 2*x1^2*x2^2 + x2^4"


def test_invariant_check(capsys):
    code, out, _ = run(capsys, "invariant-check", "w1", "-i", Z2)
    assert (code, out.strip()) == (0, "INVARIANT")
    code, out, _ = run(capsys, "invariant-check", "X1", "-i", Z2)
    assert (code, out.strip()) == (0, "INVARIANT")
    code, out, _ = run(capsys, "invariant-check", "notinv", "-i", Z2)
    assert (code, out.strip()) == (1, "NOT INVARIANT")
    code, payload = run_json(capsys, "invariant-check", "notinv", "-i", Z2)
    assert (code, payload) == (1, {"invariant": False})


def test_poincare(capsys):
    code, out, _ = run(capsys, "poincare", "vol2", "-i", Z2)
    assert (code, out.strip()) == (0, "(-x2) dx1 + (x1) dx2")
    code, out, _ = run(capsys, "poincare", "w1", "-i", Z2)
    assert (code, out.strip()) == (0, "x1^2")
    code, out, _ = run(capsys, "poincare", "notclosed", "-i", Z2)
    assert code == 1
    assert out.strip() == "NOT CLOSED (residual (-1) dx1^dx2)"
    code, _, err = run(capsys, "poincare", "X1", "-i", Z2)
    assert code == 2
    assert "is a vector field" in err


def test_extend_check(capsys):
    code, out, _ = run(capsys, "extend-check", THETA1, "-i", Z2)
    assert code == 0
    assert out.splitlines() == ["EXTENDABLE", "A1 = 1", "A2 = 0", "A3 = 0"]
    code, out, _ = run(capsys, "extend-check", THETA4, "-i", Z2)
    assert (code, out.strip()) == (1, "NOT EXTENDABLE")
    code, payload = run_json(capsys, "extend-check", THETA4, "-i", Z2)
    assert code == 1
    assert payload["extendable"] is False
    assert any(entry != "0" for entry in payload["certificate"])


def test_verify_golden_deterministic(capsys):
    code, first, _ = run(capsys, "verify-golden")
    assert code == 0
    code, second, _ = run(capsys, "verify-golden")
    assert first == second
    lines = first.splitlines()
    assert lines[-1] == "golden suite: 12/12 checks passed"
    assert all(line.startswith("PASS") for line in lines[:-1])
    code, payload = run_json(capsys, "verify-golden")
    assert code == 0
    assert payload["passed"] is True
    assert len(payload["checks"]) == 12


# ---------------------------------------------------------------------------
# input errors (exit code 2)
# ---------------------------------------------------------------------------

def test_missing_and_unreadable_problem_files(capsys, tmp_path):
    code, _, err = run(capsys, "invariants")
    assert code == 2
    assert "problem file is required" in err

    code, _, err = run(capsys, "invariants", "-i", str(tmp_path / "absent.json"))
    assert code == 2
    assert "cannot read" in err

    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    code, _, err = run(capsys, "invariants", "-i", str(broken))
    assert code == 2
    assert "not valid JSON" in err


def test_malformed_problem_contents(capsys, tmp_path):
    wrong_size = tmp_path / "wrong_size.json"
    wrong_size.write_text(
        json.dumps({"n": 2, "group_generators": [[["1"]]]}), encoding="utf-8"
    )
    code, _, err = run(capsys, "invariants", "-i", str(wrong_size))
    assert code == 2
    assert "matrix size differs" in err

    bad_object = tmp_path / "bad_object.json"
    bad_object.write_text(
        json.dumps(
            {
                "n": 2,
                "group_generators": [[["1", "0"], ["0", "1"]]],
                "named_objects": {"bad": {"foo": 1}},
            }
        ),
        encoding="utf-8",
    )
    code, _, err = run(capsys, "push-form", "bad", "-i", str(bad_object))
    assert code == 2
    assert "bad named object" in err


def test_usage_errors(capsys):
    code, _, err = run(capsys, "push-form", "nope", "-i", Z2)
    assert code == 2
    assert "no named object 'nope'" in err

    code, _, err = run(capsys, "push-form", "X1", "-i", Z2)
    assert code == 2
    assert "is a vector field, not a form" in err

    code, _, err = run(capsys, "invariants", "-i", Z2, "--cap", "1")
    assert code == 2
    assert "not finite within cap" in err

    code, _, err = run(capsys, "lift-vf", "1,0,0", "-i", Z2)
    assert code == 2
    assert "cannot read orbit field" in err


# ---------------------------------------------------------------------------
# problem file round trip and installed script
# ---------------------------------------------------------------------------

def test_problem_file_round_trip():
    problem = cli.load_problem(Z2)
    data = problem.to_json()
    assert cli.ProblemFile.from_json(data).to_json() == data


def test_installed_console_script():
    result = subprocess.run(
        ["orbitcalc", "relations", "-i", Z2], capture_output=True, text=True
    )
    assert result.returncode == 0
    assert result.stdout.strip() == "y2^2 - y1*y3"
