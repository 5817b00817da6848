"""Reference primal elastodynamics: linear elements, lumped mass, leapfrog.

Solves ``rho0 u_tt = sigma(u_x)_x`` on a :class:`~dualelast.fem_static.Mesh1D`
with prescribed end velocities.  It exists to show how the primal problem
behaves where the stiffness is negative; it is not a production code.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import material
from .fem_spacetime import DynamicCase
from .fem_static import Mesh1D

__all__ = ["PrimalState", "PrimalHistory", "cfl_time_step", "initial_displacement", "evolve_primal", "BLOW_UP_STRAIN"]

BLOW_UP_STRAIN = 1e3
CFL_SAFETY = 0.1


@dataclass
class PrimalState:
    """Nodal displacement and velocity at time ``t``."""

    t: float
    u: np.ndarray
    v: np.ndarray


@dataclass
class PrimalHistory:
    """Saved states plus the blow-up outcome.

    ``strain[k]`` holds the element strains of ``states[k]`` and ``energy[k]``
    the total (kinetic + stored) energy.
    """

    mesh: Mesh1D
    dt: float
    states: list = field(default_factory=list)
    strain: list = field(default_factory=list)
    energy: list = field(default_factory=list)
    blow_up: bool = False
    blow_up_time: float | None = None
    steps_taken: int = 0

    @property
    def times(self):
        return np.array([s.t for s in self.states])

    @property
    def max_abs_strain(self):
        return np.array([np.max(np.abs(e)) for e in self.strain])


def _max_abs_stiffness(e_lo, e_hi):
    # stiffness is a convex parabola in e: the max of |.| sits at an end or at e = 1
    cand = [e_lo, e_hi] + ([1.0] if e_lo <= 1.0 <= e_hi else [])
    return float(np.max(np.abs(material.stiffness(np.array(cand)))))


def cfl_time_step(mesh: Mesh1D, e_range, rho0=1.0, safety=CFL_SAFETY):
    """Conservative explicit step ``safety * h_min / c_max``.

    ``c_max = sqrt(max |stiffness| / rho0)`` over the strain interval
    ``e_range = (lo, hi)``.
    """
    lo, hi = float(np.min(e_range)), float(np.max(e_range))
    c_max = np.sqrt(max(_max_abs_stiffness(lo, hi), 1e-12) / rho0)
    return safety * float(np.min(mesh.h)) / c_max


def initial_displacement(e0, mesh: Mesh1D, breakpoints=()):
    """Nodal ``u0(x_i) = int_0^{x_i} e0``, so element strains are cell averages of ``e0``.

    ``breakpoints`` lists discontinuities of ``e0`` to help the quadrature.
    """
    x = mesh.nodes
    pts = np.asarray(breakpoints, dtype=float)
    incr = np.empty(mesh.n_elements)
    for k in range(mesh.n_elements):
        a, b = x[k], x[k + 1]
        inner = pts[(pts > a) & (pts < b)]
        incr[k] = quad(lambda s: float(e0(s)), a, b, points=inner if inner.size else None, limit=200)[0]
    return np.concatenate([[0.0], np.cumsum(incr)])


def _element_strain(u, mesh):
    return np.diff(u) / mesh.h


def _energy(u, v, mass, mesh):
    return 0.5 * float(np.sum(mass * v * v)) + float(np.sum(mesh.h * material.energy_density(_element_strain(u, mesh))))


def evolve_primal(case: DynamicCase, mesh: Mesh1D, dt=None, n_steps=None, *, u0=None, save_every=1, breakpoints=()):
    """Integrate the primal equations with the explicit centred-difference scheme.

    Parameters
    ----------
    case : DynamicCase
        Initial strain/velocity and end velocities.
    mesh : Mesh1D
    dt : float, optional
        Time step; defaults to :func:`cfl_time_step` over the initial strain range.
    n_steps : int, optional
        Defaults to ``ceil(case.T / dt)`` (``dt`` is then shrunk to land on ``T``).
    u0 : array, optional
        Initial nodal displacement; defaults to integrating ``case.e0``.
    save_every : int
        Store every ``save_every``-th state.
    breakpoints : sequence of float
        Discontinuities of ``case.e0``.

    Returns
    -------
    PrimalHistory
        Integration halts as soon as ``max |e| > 1e3`` or any value is not
        finite; ``blow_up`` is then set and no later state is stored.
    """
    rho0 = case.rho0
    u = initial_displacement(case.e0, mesh, breakpoints) if u0 is None else np.array(u0, dtype=float)
    v = np.asarray(case.v0(mesh.nodes), dtype=float) * np.ones(mesh.n_nodes)
    e = _element_strain(u, mesh)
    if dt is None:
        dt = cfl_time_step(mesh, (e.min(), e.max()), rho0)
        if n_steps is None:
            n_steps = int(np.ceil(case.T / dt - 1e-9))
            dt = case.T / n_steps
    if n_steps is None:
        n_steps = int(np.ceil(case.T / dt - 1e-9))
    if not dt > 0:
        raise ValueError("dt must be > 0")

    h = mesh.h
    mass = rho0 * 0.5 * (np.concatenate([h, [0.0]]) + np.concatenate([[0.0], h]))

    def accel(u):
        with np.errstate(over="ignore", invalid="ignore"):
            s = material.stress(_element_strain(u, mesh))
        f = np.zeros(mesh.n_nodes)
        f[:-1] += s
        f[1:] -= s
        a = f / mass
        a[0] = a[-1] = 0.0
        return a

    hist = PrimalHistory(mesh=mesh, dt=dt)

    def record(t, u, v):
        hist.states.append(PrimalState(t, u.copy(), v.copy()))
        hist.strain.append(_element_strain(u, mesh))
        hist.energy.append(_energy(u, v, mass, mesh))

    t = 0.0
    v[0], v[-1] = case.v_left(t), case.v_right(t)
    record(t, u, v)
    a = accel(u)
    for n in range(1, n_steps + 1):
        v_half = v + 0.5 * dt * a
        t = n * dt
        t_half = t - 0.5 * dt
        v_half[0], v_half[-1] = case.v_left(t_half), case.v_right(t_half)
        u = u + dt * v_half
        a = accel(u)
        v = v_half + 0.5 * dt * a
        v[0], v[-1] = case.v_left(t), case.v_right(t)
        hist.steps_taken = n
        e = _element_strain(u, mesh)
        with np.errstate(over="ignore", invalid="ignore"):
            bad = not (np.all(np.isfinite(u)) and np.all(np.isfinite(v)) and np.max(np.abs(e)) <= BLOW_UP_STRAIN)
        if bad:
            hist.blow_up = True
            hist.blow_up_time = t
            break
        if n % save_every == 0 or n == n_steps:
            record(t, u, v)
    return hist
