import math
import os
from pathlib import Path

import pytest

import noether

SCENARIOS = Path(__file__).resolve().parents[2] / "scenarios"


def test_friction_equation_and_charge():
    L = noether.Lagrangian("1/2*exp(k*t)*q1_t^2", 1, ["k"])
    assert [str(a) for a in noether.solve_accelerations(L)] == ["-k*q1_t"]
    gamma = noether.VectorField("dt - k/2*q1 dq1", 1, ["k"])
    report = noether.symmetry_classify(L, gamma, "gamma")
    assert report.symmetry_class == "Strict"
    expected = noether.parse("1/2*exp(k*t)*q1_t*(q1_t + k*q1)", 1, ["k"])
    assert report.charge.expression == expected
    assert (report.charge.expression - expected).is_zero() == "ProvenZero"


def test_galilei_boost_is_quasi():
    L = noether.Lagrangian("1/2*q1_t^2")
    report = noether.symmetry_classify(L, noether.VectorField("v*t dq1", 1, ["v"]))
    assert report.symmetry_class == "Quasi"
    assert str(report.sigma) == "v*q1"
    traj = noether.integrate(L, {"q1": 1.0, "q1_t": 1.0, "v": 1.0}, 0.0, 10.0, 1e-3)
    drift = noether.drift_report(traj, [report.charge])[0]
    assert drift["max_rel"] < 1e-12


def test_expr_operations():
    e = noether.parse("q1^2*sin(t)")
    assert e.diff("q1") == noether.parse("2*q1*sin(t)")
    assert e.evaluate({"q1": 2.0, "t": math.pi / 2}) == pytest.approx(4.0)
    assert (e - e).is_zero() == "ProvenZero"
    assert sorted(e.free_symbols) == ["q1", "t"]
    with pytest.raises(noether.ParseError):
        noether.parse("q1 +")
    with pytest.raises(noether.MathError):
        noether.Lagrangian("q1_tt")


def test_legendre_bridge():
    L = noether.Lagrangian("1/2*q1_t^2 - 1/2*w^2*q1^2", 1, ["w"])
    H = noether.associated_hamiltonian(L)
    assert str(H.density) == "1/2*p1^2 + 1/2*w^2*q1^2"
    assert set(noether.verify_association(L, H).values()) == {"ProvenZero"}
    bad = noether.verify_association(noether.Lagrangian("1/2*q1_t^2"), noether.Hamiltonian("p1^2"))
    assert bad["energy_relation"] == "ProvenNonzero"
    assert noether.legendre_map(L)["regularity"] == "Hyperregular"


def test_hamiltonian_side():
    H = noether.Hamiltonian("1/2*exp(-k*t)*p1^2", 1, ["k"])
    report = noether.symmetry_classify_hamiltonian(H, noether.VectorField("dt - k/2*q1 dq1", 1, ["k"]))
    assert report.symmetry_class == "Strict"
    assert noether.verify_first_integral(H, report.charge.expression) == "ProvenZero"
    assert str(noether.poisson_bracket(noether.parse("p + 1/2*p1^2"), noether.parse("q1"))) == "p1"


def test_find_symmetries_rotation():
    L = noether.Lagrangian("1/2*(q1_t^2 + q2_t^2)", 2)
    found = [str(u) for u in noether.find_symmetries(L, 1)]
    assert len(found) >= 3
    assert "-q2 dq1 + q1 dq2" in found


def test_cli_in_process(tmp_path):
    code, out, _ = noether.run_cli(["derive", str(SCENARIOS / "friction.scn")])
    assert code == 0
    assert "q1_tt = -k*q1_t" in out
    code, _, err = noether.run_cli(["check", str(SCENARIOS / "mismatched.scn")])
    assert code == 4
    assert "energy-relation" in err
    csv = tmp_path / "out.csv"
    code, _, _ = noether.run_cli(["simulate", str(SCENARIOS / "free.scn"), "-f", "L", "--out", str(csv)])
    assert code == 0
    assert csv.read_text().startswith("t,q1,q1_t,boost")


def test_scenario_round_trip():
    text = (SCENARIOS / "harmonic.scn").read_text()
    printed = noether.parse_scenario(text)
    assert noether.parse_scenario(printed) == printed
    with pytest.raises(noether.ParseError):
        noether.parse_scenario("[system]\ndimension = 1\n")


def test_module_location():
    build_dir = os.environ.get("NOETHER_PYTHON_DIR")
    if build_dir:
        assert Path(noether.__file__).resolve().is_relative_to(Path(build_dir).resolve())
