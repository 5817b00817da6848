import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualelast.dtp import (
    AuxPotentialParams,
    DynamicPointDual,
    PointBase,
    StaticPointDual,
    dtp_dynamic,
    dtp_dynamic_derivatives,
    dtp_static,
    dtp_static_derivatives,
    solve_monotone,
    strain_residual_dynamic,
    strain_residual_static,
)
from dualelast.errors import NoBracket, NonMonotone

P = AuxPotentialParams()


def test_zero_dual_maps_to_base():
    b = PointBase(u_bar=np.array([0.3, -1.0]), e_bar=np.array([0.2, 1.7]))
    u, e = dtp_static(StaticPointDual(), b, P)
    assert np.array_equal(u, b.u_bar)
    assert np.allclose(e, b.e_bar)
    v, e = dtp_dynamic(DynamicPointDual(), b, P)
    assert np.array_equal(v, b.u_bar)
    assert np.allclose(e, b.e_bar)


def test_static_linear_part_closed_form():
    # mu_x = 0 leaves c s|s| + c s = lam, solved by hand
    lam = np.array([-150.0, -3.0, 0.0, 7.0, 300.0])
    b = PointBase(e_bar=np.full(5, 0.4))
    _, e = dtp_static(StaticPointDual(lam=lam, mu_x=0.0), b, P)
    s = np.sign(lam) * (-1.0 + np.sqrt(1.0 + 4.0 * np.abs(lam) / P.c_e)) / 2.0
    assert np.allclose(e - 0.4, s, atol=1e-13)


@settings(max_examples=200, deadline=None)
@given(
    lam=st.floats(-50, 50),
    mu_x=st.floats(-2, 2),
    e_bar=st.floats(-0.5, 2.5),
)
def test_static_residual_below_tolerance(lam, mu_x, e_bar):
    b = PointBase(e_bar=np.array([e_bar]))
    _, e = dtp_static(StaticPointDual(lam=np.array([lam]), mu_x=np.array([mu_x])), b, P)
    g, dg = strain_residual_static(e, lam, mu_x, e_bar, P.c_e)
    assert abs(g[0]) <= P.tol
    assert dg[0] > 0


@settings(max_examples=200, deadline=None)
@given(P_t=st.floats(-50, 50), L_x=st.floats(-0.3, 0.3), e_bar=st.floats(-0.5, 2.5))
def test_dynamic_residual_below_tolerance(P_t, L_x, e_bar):
    b = PointBase(e_bar=np.array([e_bar]))
    _, e = dtp_dynamic(DynamicPointDual(P_t=np.array([P_t]), L_x=np.array([L_x])), b, P)
    g, _ = strain_residual_dynamic(e, P_t, L_x, e_bar, P.c_e)
    assert abs(g[0]) <= P.tol


@settings(max_examples=100, deadline=None)
@given(lam=st.floats(-20, 20), mu_x=st.floats(-2, 2), e_bar=st.floats(-0.5, 2.5))
def test_static_derivatives_match_fd(lam, mu_x, e_bar):
    h = 1e-6
    b = PointBase(e_bar=np.array([e_bar]))
    d = StaticPointDual(lam=np.array([lam]), mu_x=np.array([mu_x]))
    _, e = dtp_static(d, b, P)
    du, du_dmu, de_dlam, de_dmux = dtp_static_derivatives(d, b, P, e)
    fd_lam = (dtp_static(StaticPointDual(lam=d.lam + h, mu_x=d.mu_x), b, P)[1]
              - dtp_static(StaticPointDual(lam=d.lam - h, mu_x=d.mu_x), b, P)[1]) / (2 * h)
    fd_mux = (dtp_static(StaticPointDual(lam=d.lam, mu_x=d.mu_x + h), b, P)[1]
              - dtp_static(StaticPointDual(lam=d.lam, mu_x=d.mu_x - h), b, P)[1]) / (2 * h)
    assert fd_lam == pytest.approx(de_dlam, rel=1e-5, abs=1e-9)
    assert fd_mux == pytest.approx(de_dmux, rel=1e-5, abs=1e-9)
    assert du[0] == du_dmu[0] == 1.0 / P.c_u


def test_no_bulk_drops_mu_from_displacement():
    d = StaticPointDual(lam_x=np.array([2.0]), mu=np.array([5.0]))
    b = PointBase(u_bar=np.array([0.0]), e_bar=np.array([1.0]))
    assert dtp_static(d, b, P, bulk=True)[0][0] == pytest.approx(7.0 / P.c_u)
    assert dtp_static(d, b, P, bulk=False)[0][0] == pytest.approx(2.0 / P.c_u)
    _, du_dmu, _, _ = dtp_static_derivatives(d, b, P, np.array([1.0]), bulk=False)
    assert du_dmu[0] == 0.0


def test_dynamic_velocity_formula_and_derivatives():
    p = AuxPotentialParams(c_v=50.0, rho0=2.0)
    d = DynamicPointDual(L_t=np.array([3.0]), P_x=np.array([1.0]))
    v, e = dtp_dynamic(d, PointBase(u_bar=np.array([0.5]), e_bar=np.array([1.0])), p)
    assert v[0] == pytest.approx((2.0 * 3.0 - 1.0) / 50.0 + 0.5)
    dv_dLt, dv_dPx, de_dPt, _ = dtp_dynamic_derivatives(d, PointBase(e_bar=np.array([1.0])), p, e)
    assert dv_dLt[0] == pytest.approx(2.0 / 50.0)
    assert dv_dPx[0] == pytest.approx(-1.0 / 50.0)
    assert de_dPt[0] == pytest.approx(1.0 / p.c_e)


def test_nonmonotone_detected():
    # a large negative L_x times the positive stiffness far from e = 1 breaks monotonicity
    with pytest.raises(NonMonotone) as info:
        dtp_dynamic(DynamicPointDual(L_x=np.array([0.0, -50.0])), PointBase(e_bar=np.array([0.0, 0.0])), P)
    assert list(info.value.index) == [1]


def test_no_bracket_detected():
    with pytest.raises(NoBracket):
        solve_monotone(lambda e: (e - 100.0, np.ones_like(e)), np.array([0.0]), 5.0, 1e-12)


def test_params_validation():
    with pytest.raises(ValueError, match="c_e"):
        AuxPotentialParams(c_e=-1.0)
    assert AuxPotentialParams(c_e=1e3).tol == pytest.approx(1e-9)
