import numpy as np
import pytest
from scipy.optimize import brentq

from dualelast import material
from dualelast.basestate import PiecewiseLinear, derivative_mismatch
from dualelast.cases import (
    CASE_NAMES,
    GRAIN_BREAKPOINTS,
    GRAIN_END_DISPLACEMENT,
    GRAIN_STRAINS,
    build_case,
    equal_stress_strains,
    parse_case_name,
    run_dynamic_case,
    run_static_case,
    staircase_profile,
)
from dualelast.errors import UnknownCase


@pytest.mark.parametrize("name", CASE_NAMES)
def test_every_case_builds_with_consistent_base(name):
    spec = build_case(name)
    assert spec.name == name
    if spec.kind == "static":
        x = np.linspace(0.0, 1.0, 101)
        assert derivative_mismatch(spec.base, x) < 1e-8
        assert spec.base.u_bar(0.0) == pytest.approx(0.0)
        assert spec.base.u_bar(1.0) == pytest.approx(spec.bc.alpha_star)


def test_parse_case_name():
    assert parse_case_name("hat_bifurcation(a=0.2)") == ("hat_bifurcation", {"a": 0.2})
    assert parse_case_name("hat_bifurcation(0.5)") == ("hat_bifurcation", {"a": 0.5})
    assert build_case("hat_bifurcation(a=0.2)").label == "hat_bifurcation(a=0.2)"
    with pytest.raises(UnknownCase):
        build_case("no_such_case")
    with pytest.raises(UnknownCase):
        build_case("stress_free", a=1.0)
    with pytest.raises(UnknownCase):
        parse_case_name("hat_bifurcation(a=x)")


def test_equal_stress_strains_against_independent_roots():
    sigma, (ea, eb, ec) = equal_stress_strains()
    assert sigma == pytest.approx(0.76715014698663, abs=1e-12)
    # independent oracle: numpy polynomial roots of 4 d (d^2 - 1) - sigma with d = e - 1
    roots = np.sort(np.roots([4.0, 0.0, -4.0, -sigma]).real) + 1.0
    assert np.allclose([ea, eb, ec], roots, atol=1e-12)
    lengths = np.diff(GRAIN_BREAKPOINTS)
    assert np.array([ea, eb, ec, eb, ea]) @ lengths == pytest.approx(GRAIN_END_DISPLACEMENT, abs=1e-13)
    # the tabulated strains are these roots rounded
    assert np.allclose([ea, eb, ec], [GRAIN_STRAINS[0], GRAIN_STRAINS[1], GRAIN_STRAINS[2]], atol=5e-3)


def test_staircase_profile():
    base = staircase_profile(2.0 / 3.0, 4)
    x = np.linspace(0, 1, 1001)
    assert set(np.unique(np.round(base.e_bar(x), 12))) <= {0.0, 2.0}
    assert base.u_bar(1.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        staircase_profile(0.5, 3)


def test_piecewise_linear():
    pl = PiecewiseLinear.from_slopes([0.0, 0.5, 1.0], [2.0, 0.0])
    assert pl(0.25) == pytest.approx(0.5)
    assert pl(0.75) == pytest.approx(1.0)
    assert pl.slope(0.5) == 0.0
    with pytest.raises(ValueError):
        PiecewiseLinear([0.0, 0.0], [1.0, 2.0])


def test_stress_free_run_small_mesh():
    rep = run_static_case(build_case("stress_free"), 100)
    assert rep.newton.converged
    assert rep.errors["u_l1"] < 1e-3 and rep.errors["e_l1"] < 1e-3
    assert rep.u_hat.shape == rep.x.shape == rep.u_target.shape


def test_solver_failure_carries_case_context():
    with pytest.raises(Exception, match=r"hat_bifurcation\(a=0.4\), 100 elements"):
        run_static_case(build_case("hat_bifurcation", a=0.4), 100)


def test_static_driver_rejects_dynamic_spec():
    with pytest.raises(ValueError):
        run_static_case(build_case("grain_boundary_dynamic"), 10)
    with pytest.raises(ValueError):
        run_dynamic_case(build_case("stress_free"))


def test_perturbed_dynamics_speed_ordering():
    rep = run_dynamic_case(build_case("perturbed_dynamic"))
    (left, c_left), (mid, c_mid) = rep.wave_speeds["left_grain"], rep.wave_speeds["middle_grain"]
    # independent check of the linearised speeds
    _, (ea, _, ec) = equal_stress_strains()
    assert c_left == pytest.approx(np.sqrt(12 * (ea - 1) ** 2 - 4))
    assert c_mid == pytest.approx(np.sqrt(12 * (ec - 1) ** 2 - 4))
    assert mid > left
    assert left == pytest.approx(c_left, rel=0.05)
    assert mid == pytest.approx(c_mid, rel=0.05)


def test_dynamic_report_shapes_and_verdict():
    rep = run_dynamic_case(build_case("grain_boundary_dynamic"), 16, 16)
    assert rep.e_hat.shape == rep.v_hat.shape == rep.u_hat.shape == (17, 17)
    assert rep.verdict().startswith("dual: stable")
    assert rep.u_hat[0, 0] == 0.0
