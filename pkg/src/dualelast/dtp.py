"""Pointwise dual-to-primal (DtP) maps.

The auxiliary potential is a shifted quadratic in the displacement (or
velocity) plus a shifted quadratic-and-cubic in the strain,

    H = c_u/2 (u - u_bar)^2 + c_e/2 (e - e_bar)^2 + c_e/3 |e - e_bar|^3,

so that stationarity of the pre-dual Lagrangian in the primal variables gives
a closed form for the displacement and a scalar, strictly increasing equation
for the strain.  The strain equation is solved by safeguarded Newton with
bisection fallback on ``[e_bar - R, e_bar + R]``; every function here is
vectorised over quadrature points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import material
from .errors import NoBracket, NonMonotone, SingularDerivative

__all__ = [
    "AuxPotentialParams",
    "StaticPointDual",
    "DynamicPointDual",
    "PointBase",
    "DEFAULT_TRUST_RADIUS",
    "strain_residual_static",
    "strain_residual_dynamic",
    "dtp_static",
    "dtp_static_derivatives",
    "dtp_dynamic",
    "dtp_dynamic_derivatives",
    "solve_monotone",
]

DEFAULT_TRUST_RADIUS = 5.0
_MAX_ROOT_ITER = 200


@dataclass(frozen=True)
class AuxPotentialParams:
    c_u: float = 100.0
    c_e: float = 100.0
    c_v: float = 100.0
    rho0: float = 1.0
    trust_radius: float = DEFAULT_TRUST_RADIUS

    def __post_init__(self):
        for name in ("c_u", "c_e", "c_v", "rho0", "trust_radius"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value}")

    @property
    def tol(self):
        """Absolute tolerance on the strain equation."""
        return 1e-12 * max(1.0, self.c_e)


@dataclass
class StaticPointDual:
    """Dual data at points: ``lambda, lambda_x, mu, mu_x`` (scalars or arrays)."""

    lam: np.ndarray | float = 0.0
    lam_x: np.ndarray | float = 0.0
    mu: np.ndarray | float = 0.0
    mu_x: np.ndarray | float = 0.0


@dataclass
class DynamicPointDual:
    """Space-time dual gradients ``L_t, L_x, P_t, P_x``."""

    L_t: np.ndarray | float = 0.0
    L_x: np.ndarray | float = 0.0
    P_t: np.ndarray | float = 0.0
    P_x: np.ndarray | float = 0.0


@dataclass
class PointBase:
    """Base state at points; ``u_bar`` doubles as ``v_bar`` in dynamics."""

    u_bar: np.ndarray | float = 0.0
    e_bar: np.ndarray | float = 0.0


def _h_e(e, e_bar, c_e):
    s = e - e_bar
    return c_e * s * np.abs(s) + c_e * s


def _h_ee(e, e_bar, c_e):
    return 2.0 * c_e * np.abs(e - e_bar) + c_e


# strain equations ---------------------------------------------------------


def strain_residual_static(e, lam, mu_x, e_bar, c_e):
    """``g(e) = -6(e-1)^2 mu_x + 2 mu_x - lam + c_e (e-e_bar)|e-e_bar| + c_e (e-e_bar)``

    and its derivative with respect to ``e``.
    """
    g = -material.flux_derivative(e) * mu_x - lam + _h_e(e, e_bar, c_e)
    dg = -12.0 * (e - 1.0) * mu_x + _h_ee(e, e_bar, c_e)
    return g, dg


def strain_residual_dynamic(e, P_t, L_x, e_bar, c_e):
    """``g(e) = c_e (e-e_bar)|e-e_bar| + c_e (e-e_bar) - P_t + L_x stiffness(e)``."""
    g = _h_e(e, e_bar, c_e) - P_t + L_x * material.stiffness(e)
    dg = _h_ee(e, e_bar, c_e) + L_x * material.stiffness_derivative(e)
    return g, dg


def solve_monotone(fun, e_bar, radius, tol):
    """Solve ``fun(e)[0] = 0`` pointwise on ``[e_bar - radius, e_bar + radius]``.

    ``fun`` returns ``(g, dg)``.  The derivative of every strain equation used
    here is piecewise linear in ``e`` with a kink at ``e_bar`` only, so
    positivity at the two bracket ends and at ``e_bar`` proves strict
    monotonicity on the whole bracket.

    Raises
    ------
    NonMonotone, NoBracket
    """
    e_bar = np.asarray(e_bar, dtype=float)
    lo = e_bar - radius
    hi = e_bar + radius
    g_lo, dg_lo = fun(lo)
    g_hi, dg_hi = fun(hi)
    g_mid, dg_mid = fun(e_bar)

    bad = ~((dg_lo > 0) & (dg_hi > 0) & (dg_mid > 0))
    if np.any(bad):
        idx = np.flatnonzero(np.atleast_1d(bad))
        raise NonMonotone(
            f"strain equation not monotone on the trust bracket at {idx.size} point(s)",
            index=idx,
        )
    bad = ~((g_lo <= 0) & (g_hi >= 0))
    if np.any(bad):
        idx = np.flatnonzero(np.atleast_1d(bad))
        raise NoBracket(
            f"no sign change on [e_bar - {radius}, e_bar + {radius}] at {idx.size} point(s)",
            index=idx,
        )

    # the kink is a natural split point: it tightens the bracket for free
    lo = np.where(g_mid > 0, lo, e_bar)
    hi = np.where(g_mid > 0, e_bar, hi)
    x = np.array(e_bar, dtype=float, copy=True)
    g, dg = g_mid, dg_mid
    done = np.abs(g) <= tol
    for _ in range(_MAX_ROOT_ITER):
        if np.all(done):
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = x - g / dg
        inside = (cand > lo) & (cand < hi) & np.isfinite(cand)
        cand = np.where(inside, cand, 0.5 * (lo + hi))
        x = np.where(done, x, cand)
        g, dg = fun(x)
        pos = g > 0
        hi = np.where(~done & pos, x, hi)
        lo = np.where(~done & ~pos, x, lo)
        # bracket collapsed to round-off: accept
        done = done | (np.abs(g) <= tol) | (hi - lo <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(x)))
    # one extra Newton step drives accepted roots to round-off; kept only where it helps
    with np.errstate(divide="ignore", invalid="ignore"):
        polished = x - g / dg
    ok = np.isfinite(polished)
    g2, _ = fun(np.where(ok, polished, x))
    return np.where(ok & (np.abs(g2) < np.abs(g)), polished, x)


# statics ------------------------------------------------------------------


def dtp_static(d: StaticPointDual, b: PointBase, p: AuxPotentialParams, bulk: bool = True):
    """Map static dual data to ``(u_hat, e_hat)``.

    ``u_hat = (lambda_x + mu)/c_u + u_bar``; when the bulk term of the primal
    energy is absent the multiplier ``mu`` no longer pairs with ``u`` and the
    map reduces to ``lambda_x / c_u + u_bar``.
    """
    lam_x = np.asarray(d.lam_x, dtype=float)
    mu = np.asarray(d.mu, dtype=float) if bulk else 0.0
    u_hat = (lam_x + mu) / p.c_u + np.asarray(b.u_bar, dtype=float)

    lam = np.asarray(d.lam, dtype=float)
    mu_x = np.asarray(d.mu_x, dtype=float)
    e_bar = np.asarray(b.e_bar, dtype=float)
    lam, mu_x, e_bar = np.broadcast_arrays(lam, mu_x, e_bar)
    e_hat = solve_monotone(
        lambda e: strain_residual_static(e, lam, mu_x, e_bar, p.c_e),
        e_bar,
        p.trust_radius,
        p.tol,
    )
    return u_hat, e_hat


def dtp_static_derivatives(d: StaticPointDual, b: PointBase, p: AuxPotentialParams, e_hat, bulk: bool = True):
    """Implicit derivatives ``(du/dlambda_x, du/dmu, de/dlambda, de/dmu_x)``."""
    _, dg = strain_residual_static(e_hat, d.lam, d.mu_x, b.e_bar, p.c_e)
    dg = np.asarray(dg, dtype=float)
    if np.any(np.abs(dg) < 1e-12 * p.c_e):
        raise SingularDerivative("strain equation derivative vanishes", index=np.flatnonzero(np.abs(dg) < 1e-12 * p.c_e))
    du = np.full_like(dg, 1.0 / p.c_u)
    du_dmu = du if bulk else np.zeros_like(dg)
    return du, du_dmu, 1.0 / dg, material.flux_derivative(e_hat) / dg


# dynamics -----------------------------------------------------------------


def dtp_dynamic(d: DynamicPointDual, b: PointBase, p: AuxPotentialParams):
    """Map space-time dual gradients to ``(v_hat, e_hat)``."""
    v_hat = (p.rho0 * np.asarray(d.L_t, dtype=float) - np.asarray(d.P_x, dtype=float)) / p.c_v + np.asarray(
        b.u_bar, dtype=float
    )
    P_t, L_x, e_bar = np.broadcast_arrays(
        np.asarray(d.P_t, dtype=float), np.asarray(d.L_x, dtype=float), np.asarray(b.e_bar, dtype=float)
    )
    e_hat = solve_monotone(
        lambda e: strain_residual_dynamic(e, P_t, L_x, e_bar, p.c_e),
        e_bar,
        p.trust_radius,
        p.tol,
    )
    return v_hat, e_hat


def dtp_dynamic_derivatives(d: DynamicPointDual, b: PointBase, p: AuxPotentialParams, e_hat):
    """``(dv/dL_t, dv/dP_x, de/dP_t, de/dL_x)``."""
    _, dg = strain_residual_dynamic(e_hat, d.P_t, d.L_x, b.e_bar, p.c_e)
    dg = np.asarray(dg, dtype=float)
    if np.any(np.abs(dg) < 1e-12 * p.c_e):
        raise SingularDerivative("strain equation derivative vanishes", index=np.flatnonzero(np.abs(dg) < 1e-12 * p.c_e))
    ones = np.ones_like(dg)
    return p.rho0 / p.c_v * ones, -ones / p.c_v, 1.0 / dg, -material.stiffness(e_hat) / dg
