import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualelast import material
from dualelast.material import SvkParams

strains = st.floats(-3.0, 5.0, allow_nan=False)


@given(strains)
def test_stress_is_energy_derivative(e):
    h = 1e-6
    fd = (material.energy_density(e + h) - material.energy_density(e - h)) / (2 * h)
    assert fd == pytest.approx(material.stress(e), rel=1e-6, abs=1e-6)


@given(strains)
def test_stiffness_is_stress_derivative(e):
    h = 1e-6
    fd = (material.stress(e + h) - material.stress(e - h)) / (2 * h)
    assert fd == pytest.approx(material.stiffness(e), rel=1e-6, abs=1e-6)
    assert material.flux(e) == pytest.approx(0.5 * material.stress(e))
    assert material.flux_derivative(e) == pytest.approx(0.5 * material.stiffness(e))


def test_wells_and_spinodals():
    assert material.energy_density(0.0) == 0.0
    assert material.energy_density(2.0) == 0.0
    assert material.stress(np.array([0.0, 1.0, 2.0])) == pytest.approx([0.0, 0.0, 0.0])
    assert material.stiffness(material.SPINODAL_LOW) == pytest.approx(0.0, abs=1e-12)
    assert material.stiffness(material.SPINODAL_HIGH) == pytest.approx(0.0, abs=1e-12)
    assert material.stiffness(1.0) == -4.0
    assert material.stiffness_derivative(1.5) == pytest.approx(12.0)


@pytest.mark.parametrize("d,lame", [(2, 0.0), (2, 0.7), (3, 0.3)])
def test_svk_stress_is_energy_gradient(d, lame):
    rng = np.random.default_rng(d)
    params = SvkParams(shear_modulus=1.3, lame=lame, dim=d)
    F = rng.normal(size=(d, d))
    P = material.svk_stress(F, params)
    h = 1e-6
    fd = np.zeros_like(F)
    for i in range(d):
        for j in range(d):
            E = np.zeros_like(F)
            E[i, j] = h
            fd[i, j] = (material.svk_energy(F + E, params) - material.svk_energy(F - E, params)) / (2 * h)
    assert np.allclose(fd, P, rtol=1e-6, atol=1e-8)


def test_svk_reference_is_stress_free():
    for d in (2, 3):
        assert np.allclose(material.svk_stress(np.eye(d), SvkParams(lame=0.4, dim=d)), 0.0)


def test_svk_params_validation():
    with pytest.raises(ValueError):
        SvkParams(shear_modulus=-1.0)
    with pytest.raises(ValueError):
        SvkParams(shear_modulus=1.0, lame=-1.0, dim=2)


def test_cofactor_identities():
    rng = np.random.default_rng(0)
    F = rng.normal(size=(5, 2, 2))
    cof = material.cofactor_2d(F)
    det = np.linalg.det(F)
    assert np.allclose(cof, det[:, None, None] * np.linalg.inv(F).transpose(0, 2, 1))
    assert np.allclose(material.cofactor_2d(cof), F)
    p = rng.normal(size=5)
    assert np.allclose(material.neo_hookean_stress(F, p), F - p[:, None, None] * cof)
