import pathlib

import numpy as np
import pytest

import conelyap as cl

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "fixtures"


def load(name):
    return cl.ConvexProcess.load(str(FIXTURES / name))


def test_cone_roundtrip_and_polar():
    c = cl.PolyCone.from_generators(np.array([[1.0, 0.0], [1.0, 1.0]]))
    assert c.dim == 2
    assert c.rays.shape == (2, 2)
    p = cl.polar(c)
    assert cl.equals(cl.polar(p), c)
    assert np.array([0.0, -1.0]) in p
    assert cl.equals(cl.PolyCone.from_json(c.to_json()), c)


def test_moreau_decomposition():
    c = cl.PolyCone.nonnegative_orthant(3)
    x = np.array([1.5, -2.0, 0.25])
    a = cl.project_point(c, x)
    b = cl.project_point(cl.polar(c), x)
    np.testing.assert_allclose(a + b, x, atol=1e-9)
    assert abs(a @ b) < 1e-9


def test_example3_feasible_set_and_strong_margin():
    h = load("ex3.json")
    f = cl.feasible_set(h)
    assert f["converged"]
    axis = cl.PolyCone.subspace(np.array([[1.0, 0.0]]), 2)
    assert cl.equals(f["cone"], axis)
    v = cl.ConeFunction.half_norm_sq(2)
    r = cl.verify(h, v, mode="strong", gamma=0.25)
    assert r["verdict"] == "holds_sampled"
    assert abs(r["gamma_margin"] - 0.25) < 1e-9
    g = cl.verify(h, v, mode="goebel_strong", gamma=0.5)
    assert g["verdict"] == "fails"
    assert "ray" in g["witness"]


def test_condition_panels():
    panel = cl.condition_panel(load("ex3.json"))
    assert panel == {
        "domain_condition": False,
        "transversality": {"pos": False, "neg": False},
        "necessary": True,
        "rint": False,
    }
    lin = cl.condition_panel(load("linear_half.json"))
    assert lin["domain_condition"] and lin["necessary"] and lin["rint"]
    assert lin["transversality"] == {"pos": True, "neg": True}


def test_conjugates():
    v = cl.ConeFunction.half_norm_sq(2)
    assert cl.conjugate(v)(np.array([3.0, 4.0])) == pytest.approx(12.5)
    c = cl.PolyCone.nonnegative_orthant(2)
    h = cl.ConeFunction.scaled_dist_sq(0.5, c)
    hs = cl.conjugate(h)
    assert hs(np.array([-1.0, -2.0])) == pytest.approx(2.5)
    assert hs(np.array([1.0, -2.0])) == float("inf")


def test_theorems_and_simulation():
    v = cl.ConeFunction.half_norm_sq(2)
    t2 = cl.check_theorem2(load("strict_diag.json"), v, 0.25, samples=200)
    assert t2["verdict"] == "holds_sampled"
    assert cl.check_theorem2(load("ex3.json"), v, 0.25, samples=200)["verdict"] == "hypothesis_not_met"
    lin = load("linear_diag.json")
    t3 = cl.check_theorem3(lin, cl.dual(lin, cl.PolarSign.negative), v, 0.25, samples=200)
    assert t3["verdict"] == "holds_sampled"
    traj = cl.simulate(load("ex3.json"), v, np.array([1.0, 0.0]), steps=12)
    norms = [np.linalg.norm(x) for x in traj["states"]]
    np.testing.assert_allclose(norms, [2.0**-k for k in range(13)], rtol=1e-9)
    assert cl.stabilizable_sample(load("ex2.json"), np.array([2.0, 1.0]), 30)["verdict"] == "yes_certified"


def test_errors_are_typed():
    with pytest.raises(cl.ParseError):
        cl.ConvexProcess.from_json({"n": 2, "grpah": {}})
    with pytest.raises(cl.Error):
        cl.ConvexProcess.load("/nonexistent.json")
    with pytest.raises(cl.Error):
        cl.verify(load("ex3.json"), cl.ConeFunction.half_norm_sq(2), gamma=1.5)
