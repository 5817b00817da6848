import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from dualelast.convexity import (
    NEO_LOWER_CONSTANT,
    NeoHookeanDualPoint,
    SvkDualPoint,
    g_neo_hookean,
    g_neo_hookean_numeric,
    g_svk,
    neo_hookean_h,
    neo_hookean_lower_bound,
    neo_hookean_ray_value,
    neo_hookean_upper_bound,
    neo_hookean_witness,
    point_hash,
    proof_kernel,
    proof_kernel_witness,
    run_bound_checks,
    svk_case,
    svk_case_constants,
    svk_lower_bound_constant,
    svk_objective,
    svk_objective_grad,
    svk_reduced,
    svk_witness_bound,
    svk_witness_value,
)
from dualelast.errors import RegimeMismatch
from dualelast.material import SvkParams, svk_stress

Z2 = np.zeros((2, 2))
I2 = np.eye(2)
P2 = SvkParams(dim=2)


def test_svk_zero_point():
    assert g_svk(SvkDualPoint(Z2, np.zeros(2), Z2), P2) == pytest.approx(0.0, abs=1e-14)


def test_svk_y_part_matches_scalar_oracle():
    g = g_svk(SvkDualPoint(Z2, np.array([1.0, 0.0]), Z2), P2)
    oracle = -minimize_scalar(lambda t: -(t - t**4 / 4)).fun
    assert g == pytest.approx(0.75) and g == pytest.approx(oracle, rel=1e-8)


@pytest.mark.parametrize("d,lame", [(2, 0.0), (2, 0.5), (3, 0.2)])
def test_svk_objective_matches_stress_and_gradient(d, lame):
    rng = np.random.default_rng(d)
    p = SvkParams(shear_modulus=0.8, lame=lame, dim=d)
    A, B, F = (rng.normal(size=(d, d)) for _ in range(3))
    k = 0.5 * (p.shear_modulus + 0.5 * p.lame)
    C = F.T @ F
    direct = np.sum(A * F) + np.sum(B * svk_stress(F, p)) - k * np.sum(C * C)
    assert svk_objective(F, A, B, p) == pytest.approx(direct)
    h = 1e-6
    fd = np.zeros_like(F)
    for i in range(d):
        for j in range(d):
            E = np.zeros_like(F)
            E[i, j] = h
            fd[i, j] = (svk_objective(F + E, A, B, p) - svk_objective(F - E, A, B, p)) / (2 * h)
    assert np.allclose(fd, svk_objective_grad(F, A, B, p), rtol=1e-6, atol=1e-7)


def test_objective_is_scaled_kernel_when_lame_is_zero():
    rng = np.random.default_rng(2)
    pt = SvkDualPoint(rng.normal(size=(2, 2)), np.zeros(2), rng.normal(size=(2, 2)))
    At, Bh = svk_reduced(pt, P2)
    F = rng.normal(size=(2, 2))
    assert svk_objective(F, pt.A, pt.B, P2) == pytest.approx(2 * P2.shear_modulus * proof_kernel(F, At, Bh))


def test_case_one_example():
    # rank-one data: |F^T F| = |F|^2, so the value is 3/4 |A_tilde|^{4/3}
    E = np.array([[1.0, 0.0], [0.0, 0.0]])
    F, val = proof_kernel_witness(2.0 * E, Z2, 1)
    assert np.allclose(F, 2.0 ** (1 / 3) * E)
    assert val == pytest.approx(0.75 * 2.0 ** (4 / 3))
    # identity data: |F^T F|^2 = 2 |A_tilde|^{-8/3}
    F, val = proof_kernel_witness(I2, Z2, 1)
    at = np.sqrt(2.0)
    assert np.allclose(F, at ** (-2 / 3) * I2)
    assert val == pytest.approx(at ** (4 / 3) - 0.25 * at ** (-2 / 3))
    assert val >= 3 / 16 * at ** (4 / 3)


def test_case_three_example():
    # with coefficient B = Id: F = 3 Id gives 27|B^T B|^2 - 81/4 |B^T B|^2
    F, val = proof_kernel_witness(Z2, I2, 3)
    assert np.allclose(F, 3 * I2)
    assert val == pytest.approx(27 / 4 * 2.0)
    assert val >= 27 / (8 * 2) * np.sum(I2**2) ** 2


def test_case_constants_values():
    c = svk_case_constants(2)
    assert c[1] == 3 / 16
    assert c[3] == pytest.approx(27 / 32)
    r = 9 / 16
    assert c[2] == pytest.approx((2 / (3 * np.sqrt(3)) - np.sqrt(512 / 27) / 36) / 2 * min(r ** (1 / 6), r**1.5))
    assert all(v > 0 for v in c.values())


def test_regime_mismatch():
    with pytest.raises(RegimeMismatch):
        proof_kernel_witness(I2, Z2, 3)
    with pytest.raises(RegimeMismatch):
        svk_witness_value(SvkDualPoint(I2, np.zeros(2), Z2), P2, 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_witness_sandwich(seed):
    rng = np.random.default_rng(seed)
    pt = SvkDualPoint(rng.normal(size=(2, 2)) * rng.uniform(0, 3), rng.normal(size=2), rng.normal(size=(2, 2)) * rng.uniform(0, 1.5))
    At, Bh = svk_reduced(pt, P2)
    case = svk_case(At, Bh, 2)
    w = svk_witness_value(pt, P2, case)
    assert w >= svk_witness_bound(pt, P2, case) - 1e-12
    assert g_svk(pt, P2) >= w - 1e-9


def test_svk_global_constant_bound():
    c = svk_lower_bound_constant(P2)
    assert 0 < c <= 0.75
    rng = np.random.default_rng(4)
    for _ in range(10):
        pt = SvkDualPoint(rng.normal(size=(2, 2)), rng.normal(size=2), rng.normal(size=(2, 2)))
        rhs = c * (np.linalg.norm(pt.a) ** (4 / 3) + np.linalg.norm(pt.A) ** (4 / 3) + np.linalg.norm(pt.B) ** 4) - 1 / c
        assert g_svk(pt, P2) >= rhs


def test_svk_three_dimensions():
    p3 = SvkParams(dim=3)
    pt = SvkDualPoint(np.eye(3), np.zeros(3), 0.2 * np.eye(3))
    g = g_svk(pt, p3)
    At, Bh = svk_reduced(pt, p3)
    assert g >= svk_witness_value(pt, p3, svk_case(At, Bh, 3)) - 1e-12
    with pytest.raises(ValueError):
        g_svk(pt, P2)


def test_neo_hookean_examples():
    assert g_neo_hookean(NeoHookeanDualPoint(Z2, np.zeros(2), Z2, 0.0)) == pytest.approx(0.0, abs=1e-15)
    rng = np.random.default_rng(0)
    for s in (2.0, -2.0, 1.0 + 1e-6):
        pt = NeoHookeanDualPoint(rng.normal(size=(2, 2)), rng.normal(size=2), rng.normal(size=(2, 2)), s)
        assert np.isposinf(g_neo_hookean(pt))
        assert neo_hookean_ray_value(pt, 1e8) > 1e12 or abs(s) < 1.01


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-0.95, 0.95))
def test_neo_hookean_closed_form_matches_numeric_oracle(seed, s):
    rng = np.random.default_rng(seed)
    pt = NeoHookeanDualPoint(rng.normal(size=(2, 2)), rng.normal(size=2), rng.normal(size=(2, 2)), s)
    exact = g_neo_hookean(pt)
    assert exact >= g_neo_hookean_numeric(pt, n_starts=8) - 1e-7 * max(1.0, abs(exact))
    assert exact == pytest.approx(g_neo_hookean_numeric(pt, n_starts=8), rel=1e-6, abs=1e-8)


def test_neo_hookean_unit_s_cases():
    # s = 1 with data orthogonal to the kernel of I - cof stays finite
    A = np.array([[1.0, 0.0], [0.0, -1.0]])
    h, F, p = neo_hookean_h(A, Z2, 1.0)
    assert np.isfinite(h) and h == pytest.approx(0.5)
    h_inf, _, _ = neo_hookean_h(I2, Z2, 1.0)
    assert np.isposinf(h_inf)


def test_neo_hookean_witnesses_and_bounds():
    rng = np.random.default_rng(9)
    B = rng.normal(size=(2, 2))
    pt_b = NeoHookeanDualPoint(-B + 1e-4 * rng.normal(size=(2, 2)), rng.normal(size=2), B, 0.3)
    F, p, val, bound = neo_hookean_witness(pt_b, "B")
    assert val >= bound
    with pytest.raises(RegimeMismatch):
        neo_hookean_witness(pt_b, "A")
    g = g_neo_hookean(pt_b)
    assert neo_hookean_lower_bound(pt_b) <= g <= neo_hookean_upper_bound(pt_b)
    assert NEO_LOWER_CONSTANT == 1 / 516
    assert np.isposinf(neo_hookean_upper_bound(NeoHookeanDualPoint(Z2, np.zeros(2), Z2, 1.0)))


def test_point_hash_is_stable():
    a = point_hash(I2, np.zeros(2))
    assert a == point_hash(I2.copy(), np.zeros(2)) and len(a) == 12
    assert a != point_hash(2 * I2, np.zeros(2))


def test_small_bound_report():
    rows = run_bound_checks(samples=6, seed=1)
    assert {r["model"] for r in rows} == {"svk", "neo_hookean", "neo_hookean_infinite"}
    assert not any(r["violation"] for r in rows)
