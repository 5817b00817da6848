"""Pointwise constitutive laws.

The 1-D double-well bar uses ``phi(e) = ((e - 1)^2 - 1)^2``. Its weak form is
written in terms of ``flux = stress / 2``; reporting uses the stress itself.
The two 2-D/3-D tensor laws (Saint Venant-Kirchhoff and the linearised
incompressible neo-Hookean stress) feed the dual-density checks in
:mod:`dualelast.convexity`.

All functions broadcast over numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DoubleWellParams",
    "SvkParams",
    "NeoHookeanParams",
    "energy_density",
    "stress",
    "flux",
    "flux_derivative",
    "stiffness",
    "stiffness_derivative",
    "svk_energy",
    "svk_stress",
    "cofactor_2d",
    "neo_hookean_stress",
]

SPINODAL_LOW = 1.0 - 1.0 / np.sqrt(3.0)
SPINODAL_HIGH = 1.0 + 1.0 / np.sqrt(3.0)


@dataclass(frozen=True)
class DoubleWellParams:
    """The double-well density has no free parameters.

    Kept as a type so callers can pass "the material" around explicitly.
    """

    wells: tuple[float, float] = (0.0, 2.0)
    local_max: float = 1.0


@dataclass(frozen=True)
class SvkParams:
    """Saint Venant-Kirchhoff moduli.

    Parameters
    ----------
    shear_modulus : float
        ``G > 0``.
    lame : float
        Second Lame constant ``L`` with ``G + d L / 2 > 0``.
    dim : int
        Spatial dimension ``d``.
    """

    shear_modulus: float = 1.0
    lame: float = 0.0
    dim: int = 2

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim}")
        if not self.shear_modulus > 0:
            raise ValueError(f"shear_modulus must be > 0, got {self.shear_modulus}")
        if not self.shear_modulus + 0.5 * self.dim * self.lame > 0:
            raise ValueError("need shear_modulus + dim * lame / 2 > 0")


@dataclass(frozen=True)
class NeoHookeanParams:
    """Incompressible neo-Hookean in 2-D with unit shear modulus."""

    dim: int = 2
    shear_modulus: float = 1.0


def energy_density(e):
    """Double-well energy ``((e - 1)^2 - 1)^2``."""
    e = np.asarray(e, dtype=float)
    return ((e - 1.0) ** 2 - 1.0) ** 2


def stress(e):
    """Stress ``4 (e - 1)((e - 1)^2 - 1)``, the derivative of the energy."""
    d = np.asarray(e, dtype=float) - 1.0
    return 4.0 * d * (d * d - 1.0)


def flux(e):
    """Weak-form flux ``2((e - 1)^3 - (e - 1))``, equal to ``stress / 2``."""
    d = np.asarray(e, dtype=float) - 1.0
    return 2.0 * (d**3 - d)


def flux_derivative(e):
    """``d flux / de = 2 (3 (e - 1)^2 - 1)``."""
    d = np.asarray(e, dtype=float) - 1.0
    return 2.0 * (3.0 * d * d - 1.0)


def stiffness(e):
    """Second derivative of the energy, ``12 (e - 1)^2 - 4``.

    Negative exactly on ``(1 - 1/sqrt(3), 1 + 1/sqrt(3))``.
    """
    d = np.asarray(e, dtype=float) - 1.0
    return 12.0 * d * d - 4.0


def stiffness_derivative(e):
    """``d stiffness / de = 24 (e - 1)``."""
    return 24.0 * (np.asarray(e, dtype=float) - 1.0)


# ---------------------------------------------------------------------------
# tensor laws
# ---------------------------------------------------------------------------


def svk_energy(F, params: SvkParams):
    """Stored energy ``G |E|^2 + (L/2) tr(E)^2`` with ``E = (F^T F - I) / 2``.

    ``F`` may carry leading batch dimensions.
    """
    F = np.asarray(F, dtype=float)
    d = F.shape[-1]
    C = np.swapaxes(F, -1, -2) @ F
    E = 0.5 * (C - np.eye(d))
    trE = np.trace(E, axis1=-2, axis2=-1)
    return params.shear_modulus * np.sum(E * E, axis=(-2, -1)) + 0.5 * params.lame * trE**2


def svk_stress(F, params: SvkParams):
    """First Piola-Kirchhoff stress of the Saint Venant-Kirchhoff energy.

    ``P(F) = F (G F^T F + (L/2)|F|^2 I - (G + L d / 2) I)``
    """
    F = np.asarray(F, dtype=float)
    d = F.shape[-1]
    G, L = params.shear_modulus, params.lame
    C = np.swapaxes(F, -1, -2) @ F
    normsq = np.sum(F * F, axis=(-2, -1))[..., None, None]
    S = G * C + (0.5 * L * normsq - (G + 0.5 * L * d)) * np.eye(d)
    return F @ S


def cofactor_2d(F):
    """Cofactor matrix of a 2x2 matrix (batched), ``det(F) F^{-T}`` when invertible."""
    F = np.asarray(F, dtype=float)
    out = np.empty_like(F)
    out[..., 0, 0] = F[..., 1, 1]
    out[..., 0, 1] = -F[..., 1, 0]
    out[..., 1, 0] = -F[..., 0, 1]
    out[..., 1, 1] = F[..., 0, 0]
    return out


def neo_hookean_stress(F, p):
    """Linearised incompressible neo-Hookean stress ``F - p cof(F)`` (2-D, G = 1)."""
    F = np.asarray(F, dtype=float)
    p = np.asarray(p, dtype=float)
    return F - p[..., None, None] * cofactor_2d(F)
