from fractions import Fraction

import numpy as np
import pytest

import hjsweep


def test_backward_weights_exact():
    s = hjsweep.backward_weights(2)
    assert dict(zip(s["offsets"], s["weights"])) == {0: Fraction(3, 2), -1: -2, -2: Fraction(1, 2)}
    assert s["accuracy_order"] == 2


def nonzero(stencil):
    return {o: w for o, w in zip(stencil["offsets"], stencil["weights"]) if w != 0}


def test_closed_form_agrees_with_oracle():
    s = hjsweep.arithmetic_weights(Fraction(1, 2), Fraction(1, 3), 4, p=2)
    o = hjsweep.oracle_weights([Fraction(1, 2) + i * Fraction(1, 3) for i in range(4)], 2)
    assert nonzero(s) == nonzero(o)


def test_constant_density_solution():
    res = hjsweep.sweep_solve(np.ones((33, 33)), order=3, filtered=True)
    assert res["w"].shape == (33, 33)
    assert np.max(np.abs(res["w"] - 1.0)) <= 1e-10
    x = np.linspace(0, 1, 33)
    assert np.allclose(res["u"], 2 * np.sqrt(np.outer(x, x)), atol=1e-10)
    assert res["high_order_used"].dtype == bool


def test_f1_first_order_converges():
    errs = []
    for n in (32, 64, 128):
        prob = hjsweep.sample_problem("f1", n)
        u = hjsweep.sweep_solve(prob["density"], order=1)["u"]
        errs.append(np.mean(np.abs(u - prob["u"])))
    assert errs[0] > errs[1] > errs[2]
    order = hjsweep.observed_order([1 / 32, 1 / 64, 1 / 128], errs)
    assert 0.8 <= order <= 1.3


def test_verify_residual():
    ok, resid = hjsweep.verify_residual("f2", count=100, seed=1)
    assert ok and resid < 1e-6


def test_study_small():
    rep = hjsweep.run_study("f1", orders=[1, 2], filtered=[True], meshes=[16, 32, 64])
    assert rep["structural_invariants_hold"]
    assert len(rep["records"]) == 6
    assert set(rep["observed_orders"]) == {"order1-filtered", "order2-filtered"}


def test_peel_and_rank():
    assert hjsweep.pareto_peel(np.array([[1, 3], [2, 2], [3, 1], [4, 4]])) == [1, 1, 1, 2]
    rng = np.random.default_rng(0)
    pts = rng.random((3000, 2))
    res = hjsweep.rank(pts, n=64)
    assert res["pde_rank"].shape == (3000,)
    assert res["agreement"] > 0.95
    assert hjsweep.compare_rankings([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)


def test_errors_surface_as_python_exceptions():
    with pytest.raises(ValueError):
        hjsweep.pareto_peel(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        hjsweep.sweep_solve(np.ones((4, 5)))
