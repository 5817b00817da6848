"""Named test problems, solve drivers and error reporting.

Every case is described declaratively by a :class:`CaseSpec`; the drivers
:func:`run_static_case` and :func:`run_dynamic_case` turn a spec and a mesh
size into a :class:`RunReport` / :class:`DynamicRunReport`.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import material
from .basestate import BaseState, DynamicBaseState, PiecewiseLinear
from .dtp import AuxPotentialParams
from .errors import UnknownCase
from .fem_spacetime import DynamicCase, DynamicDualProblem, SpaceTimeMesh, spacetime_l2_project
from .fem_static import CaseBC, Mesh1D, StaticDualProblem, l1_difference, l1_error, l2_project
from .newton import NewtonConfig, NewtonReport, newton_solve
from .primal import PrimalHistory, evolve_primal

__all__ = [
    "CASE_NAMES",
    "GRAIN_BREAKPOINTS",
    "GRAIN_STRAINS",
    "CaseSpec",
    "RunReport",
    "DynamicRunReport",
    "build_case",
    "parse_case_name",
    "staircase_profile",
    "equal_stress_strains",
    "run_static_case",
    "refinement_study",
    "run_dynamic_case",
    "measure_wave_speed",
]

CASE_NAMES = (
    "stress_free",
    "stressed_homogeneous",
    "stressed_inhomogeneous",
    "hat_bifurcation",
    "grain_boundary_static",
    "grain_boundary_dynamic",
    "perturbed_dynamic",
)

# three grains separated by two thin grain boundaries
GRAIN_BREAKPOINTS = (0.0, 0.3225, 0.3325, 0.8275, 0.8875, 1.0)
GRAIN_STRAINS = (0.115, 0.8, 2.085, 0.8, 0.115)
GRAIN_END_DISPLACEMENT = 1.138

# base-state shapes; see the decisions notes for how they were chosen
_STRESS_FREE_AMPLITUDE = 0.2
_HOMOGENEOUS_AMPLITUDE = 0.035
_HOMOGENEOUS_WAVES = 7
_GRAIN_BASE_SHIFT = (0.1, 0.1, -0.09, 0.1, 0.1)
# perturbed-dynamics displacement bumps: (centre, amplitude, width)
_BUMPS = ((0.16, 5e-4, 0.04), (0.58, 5e-4, 0.04))


@dataclass
class CaseSpec:
    """Declarative description of a named problem.

    Static cases fill ``bc`` and ``base``; dynamic cases fill ``dynamic``
    and ``dynamic_base``.  ``target`` is ``(u_t, e_t)`` when a closed-form
    solution is known.  ``reference_elements`` selects self-convergence
    against a fine-mesh solution instead.
    """

    name: str
    kind: str
    base: BaseState | DynamicBaseState
    bc: CaseBC | None = None
    dynamic: DynamicCase | None = None
    target: tuple[Callable, Callable] | None = None
    mesh_sizes: tuple = (100, 1600, 8000)
    reference_elements: int | None = None
    params: AuxPotentialParams = field(default_factory=AuxPotentialParams)
    breakpoints: tuple = ()
    equilibrium_strain: Callable | None = None
    stability_threshold: float | None = None
    nx: int = 64
    nt: int = 64
    primal_elements: int = 400
    options: dict = field(default_factory=dict)
    description: str = ""

    @property
    def label(self):
        if not self.options:
            return self.name
        args = ",".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in sorted(self.options.items()))
        return f"{self.name}({args})"


@dataclass
class RunReport:
    """Result of one static solve.

    ``errors`` maps metric names to values; which metrics are present depends
    on the case (``u_l1``/``e_l1`` against a target, ``e_l1_points`` and
    ``stress_spread`` at quadrature points, ``e_dev_l1 = ||e - 1||_1``).
    """

    case: str
    n_elements: int
    params: AuxPotentialParams
    newton: NewtonReport
    mesh: Mesh1D
    u_hat: np.ndarray
    e_hat: np.ndarray
    u_points: np.ndarray
    e_points: np.ndarray
    u_target: np.ndarray | None = None
    e_target: np.ndarray | None = None
    errors: dict = field(default_factory=dict)

    @property
    def x(self):
        return self.mesh.nodes


@dataclass
class DynamicRunReport:
    """Result of one space-time solve.

    Nodal fields have shape ``(nt + 1, nx + 1)``.  ``stability_metric`` is
    ``max |e_hat - e_eq|`` over all volume quadrature points when an
    equilibrium is known.
    """

    case: str
    nx: int
    nt: int
    T: float
    params: AuxPotentialParams
    newton: NewtonReport
    mesh: SpaceTimeMesh
    e_hat: np.ndarray
    v_hat: np.ndarray
    u_hat: np.ndarray
    e_target: np.ndarray | None = None
    u_target: np.ndarray | None = None
    stability_metric: float | None = None
    stability_threshold: float | None = None
    wave_speeds: dict = field(default_factory=dict)
    primal: PrimalHistory | None = None
    primal_departure_time: float | None = None

    @property
    def x(self):
        return self.mesh.x

    @property
    def t(self):
        return self.mesh.t

    def verdict(self):
        """One-line stability comparison of the dual and primal runs."""
        dual = "dual: not assessed"
        if self.stability_metric is not None and self.stability_threshold is not None:
            state = "stable" if self.stability_metric < self.stability_threshold else "unstable"
            dual = f"dual: {state} (max |e - e_eq| = {self.stability_metric:.3e})"
        if self.primal is None:
            return dual
        p = self.primal
        if p.blow_up:
            primal = f"primal: blow-up at t = {p.blow_up_time:.6g}"
        else:
            peak = float(np.max(p.max_abs_strain))
            left = (
                f", left equilibrium at t = {self.primal_departure_time:.6g}"
                if self.primal_departure_time is not None
                else ""
            )
            primal = f"primal: no blow-up (max |e| = {peak:.4g}{left})"
        return f"{dual}; {primal}"


# ---------------------------------------------------------------------------
# base-state builders
# ---------------------------------------------------------------------------


def _sine_base(slope, amplitude, waves=1):
    k = 2.0 * np.pi * waves
    return BaseState(
        u_bar=lambda x: slope * x + amplitude * (1.0 - np.cos(k * x)) / k,
        e_bar=lambda x: slope + amplitude * np.sin(k * x),
    )


def staircase_profile(x0, n_steps):
    """Staircase of slopes {0, 2} on a slope-1/2 backbone up to ``x0``, then slope 2.

    Each of the ``n_steps`` steps spends three quarters of its length at slope
    0 and one quarter at slope 2, so ``u_bar`` returns to the backbone at
    every step end.  With ``n_steps = 0`` the profile is the two-piece limit.

    Raises
    ------
    ValueError
        Unless the slope beyond ``x0`` lies in {0, 2}; on [0, 1] with
        ``u(1) = 1`` only ``x0 = 2/3`` qualifies.
    """
    x0 = float(x0)
    if not 0.0 < x0 < 1.0:
        raise ValueError("x0 must lie in (0, 1)")
    n_steps = int(n_steps)
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    tail = (1.0 - 0.5 * x0) / (1.0 - x0)
    if not (abs(tail - 2.0) < 1e-12 or abs(tail) < 1e-12):
        raise ValueError(f"slope beyond x0 = {x0:g} is {tail:g}; it must be 0 or 2 (use x0 = 2/3)")
    tail = 2.0 if abs(tail - 2.0) < 1e-12 else 0.0
    if n_steps == 0:
        pl = PiecewiseLinear.from_slopes([0.0, x0, 1.0], [0.5, tail])
    else:
        ell = x0 / n_steps
        pts = [0.0]
        slopes = []
        for k in range(n_steps):
            pts += [k * ell + 0.75 * ell, (k + 1) * ell]
            slopes += [0.0, 2.0]
        pts[-1] = x0
        pts.append(1.0)
        slopes.append(tail)
        pl = PiecewiseLinear.from_slopes(pts, slopes)
    return BaseState.from_piecewise(pl, label=f"staircase(x0={x0:g}, n={n_steps})")


def equal_stress_strains(total=GRAIN_END_DISPLACEMENT, breakpoints=GRAIN_BREAKPOINTS):
    """Exact equal-stress strains of the three-grain bar.

    Returns ``(sigma, (e_a, e_b, e_c))``: the three roots of ``stress(e) = sigma``
    (low well, spinodal, high well) with ``sigma`` chosen so the
    piecewise-constant strain (grain, boundary, grain, boundary, grain) =
    (e_a, e_b, e_c, e_b, e_a) integrates to ``total``.
    """
    lengths = np.diff(breakpoints)
    weights = np.array([lengths[0] + lengths[4], lengths[1] + lengths[3], lengths[2]])
    lo, hi = material.SPINODAL_LOW, material.SPINODAL_HIGH
    # local max/min of stress sit at the spinodal points
    s_max = float(material.stress(lo))

    def roots(s):
        f = lambda e: float(material.stress(e)) - s  # noqa: E731
        return (brentq(f, -1.0, lo, xtol=1e-15), brentq(f, lo, hi, xtol=1e-15), brentq(f, hi, 3.0, xtol=1e-15))

    sigma = brentq(lambda s: float(weights @ np.array(roots(s))) - total, 1e-6, s_max - 1e-9, xtol=1e-15)
    return sigma, roots(sigma)


def _grain_profile(strains):
    return PiecewiseLinear.from_slopes(GRAIN_BREAKPOINTS, strains)


def _static_target(pl: PiecewiseLinear):
    return (pl, pl.slope)


# ---------------------------------------------------------------------------
# case registry
# ---------------------------------------------------------------------------


def parse_case_name(text):
    """Split ``"hat_bifurcation(a=0.2)"`` or ``"hat_bifurcation(0.2)"`` into name and options."""
    m = re.fullmatch(r"\s*([a-z_]+)\s*(?:\((.*)\))?\s*", text)
    if not m:
        raise UnknownCase(text)
    name, args = m.group(1), m.group(2)
    options = {}
    if args:
        for k, part in enumerate(a.strip() for a in args.split(",") if a.strip()):
            key, _, val = part.partition("=")
            if not val:
                key, val = ("a" if k == 0 else f"arg{k}"), key
            try:
                options[key.strip()] = float(val)
            except ValueError as exc:
                raise UnknownCase(f"{text}: bad option {part!r}") from exc
    return name, options


def build_case(name, **options) -> CaseSpec:
    """Return the :class:`CaseSpec` for a named problem.

    Parameters
    ----------
    name : str
        One of :data:`CASE_NAMES`; ``"hat_bifurcation(a=0.2)"`` syntax is
        accepted.
    **options
        ``a`` for ``hat_bifurcation`` (default 1.0).

    Raises
    ------
    UnknownCase
    """
    if "(" in name:
        name, parsed = parse_case_name(name)
        options = {**parsed, **options}
    if name not in CASE_NAMES:
        raise UnknownCase(f"unknown case {name!r}; choose from {', '.join(CASE_NAMES)}")
    allowed = {"hat_bifurcation": {"a"}}.get(name, set())
    extra = set(options) - allowed
    if extra:
        raise UnknownCase(f"case {name!r} takes no option(s) {sorted(extra)}")
    return _BUILDERS[name](**options)


def _stress_free():
    return CaseSpec(
        name="stress_free",
        kind="static",
        base=_sine_base(1.0, _STRESS_FREE_AMPLITUDE),
        bc=CaseBC(alpha=1.0, alpha_star=1.0),
        target=(lambda x: np.asarray(x, dtype=float), lambda x: np.ones_like(np.asarray(x, dtype=float))),
        description="alpha = alpha* = 1, target u = x, e = 1",
    )


def _stressed_homogeneous():
    return CaseSpec(
        name="stressed_homogeneous",
        kind="static",
        base=_sine_base(0.5, _HOMOGENEOUS_AMPLITUDE, _HOMOGENEOUS_WAVES),
        bc=CaseBC(alpha=0.5, alpha_star=0.5),
        target=(lambda x: 0.5 * np.asarray(x, dtype=float), lambda x: np.full_like(np.asarray(x, dtype=float), 0.5)),
        description="alpha = alpha* = 1/2, target u = x/2, e = 1/2",
    )


def _stressed_inhomogeneous():
    return CaseSpec(
        name="stressed_inhomogeneous",
        kind="static",
        base=BaseState(lambda x: np.asarray(x, dtype=float), lambda x: np.ones_like(np.asarray(x, dtype=float))),
        bc=CaseBC(alpha=0.5, alpha_star=1.0),
        mesh_sizes=(100, 2000, 4000),
        reference_elements=8000,
        description="alpha = 1/2, alpha* = 1, no closed-form target",
    )


def _hat_bifurcation(a=1.0):
    a = float(a)
    if not np.isfinite(a) or a < 0:
        raise UnknownCase(f"hat_bifurcation needs a finite a >= 0, got {a}")
    # e_bar = 1 + a on the left half and 1 - a on the right: u_bar - x is a hat
    base = BaseState.from_piecewise(PiecewiseLinear.from_slopes([0.0, 0.5, 1.0], [1.0 + a, 1.0 - a]))
    if a < 0.6:
        target = (lambda x: np.asarray(x, dtype=float), lambda x: np.ones_like(np.asarray(x, dtype=float)))
    else:
        target = _static_target(PiecewiseLinear.from_slopes([0.0, 0.5, 1.0], [2.0, 0.0]))
    return CaseSpec(
        name="hat_bifurcation",
        kind="static",
        base=base,
        bc=CaseBC(alpha=1.0, alpha_star=1.0, include_bulk_term=False),
        target=target,
        mesh_sizes=(100, 2000, 4000),
        breakpoints=(0.5,),
        options={"a": a},
        description="no bulk term, u(0) = 0, u(1) = 1, base strains 1 +/- a",
    )


def _grain_boundary_static():
    shifted = np.array(GRAIN_STRAINS) + np.array(_GRAIN_BASE_SHIFT)
    lengths = np.diff(GRAIN_BREAKPOINTS)
    # keep u_bar(1) on the boundary datum by adjusting the middle grain
    shifted[2] += (GRAIN_END_DISPLACEMENT - shifted @ lengths) / lengths[2]
    return CaseSpec(
        name="grain_boundary_static",
        kind="static",
        base=BaseState.from_piecewise(_grain_profile(shifted)),
        bc=CaseBC(alpha=1.0, alpha_star=GRAIN_END_DISPLACEMENT, include_bulk_term=False),
        target=_static_target(_grain_profile(GRAIN_STRAINS)),
        mesh_sizes=(400, 1600, 8000),
        breakpoints=GRAIN_BREAKPOINTS[1:-1],
        description="three grains, two negative-stiffness boundaries, u(1) = 1.138",
    )


def _equilibrium_profile():
    _, (ea, eb, ec) = equal_stress_strains()
    return _grain_profile([ea, eb, ec, eb, ea])


def _grain_boundary_dynamic():
    eq = _equilibrium_profile()
    table = _grain_profile(GRAIN_STRAINS)
    return CaseSpec(
        name="grain_boundary_dynamic",
        kind="dynamic",
        base=DynamicBaseState.steady(eq.slope, label="equal-stress equilibrium"),
        dynamic=DynamicCase(e0=table.slope, T=1.0),
        target=(eq, eq.slope),
        breakpoints=GRAIN_BREAKPOINTS[1:-1],
        equilibrium_strain=eq.slope,
        stability_threshold=1e-2,
        description="tabulated grain strains as initial data, zero end velocities",
    )


def _bump_strain(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for c, amp, w in _BUMPS:
        out += -2.0 * (x - c) / w**2 * amp * np.exp(-(((x - c) / w) ** 2))
    return out


def _bump_displacement(x):
    x = np.asarray(x, dtype=float)
    return sum(amp * np.exp(-(((x - c) / w) ** 2)) for c, amp, w in _BUMPS)


def _perturbed_dynamic():
    eq = _equilibrium_profile()
    return CaseSpec(
        name="perturbed_dynamic",
        kind="dynamic",
        base=DynamicBaseState.steady(eq.slope, label="equal-stress equilibrium"),
        dynamic=DynamicCase(e0=lambda x: eq.slope(x) + _bump_strain(x), T=0.02),
        target=(eq, eq.slope),
        breakpoints=GRAIN_BREAKPOINTS[1:-1],
        equilibrium_strain=eq.slope,
        nx=400,
        nt=40,
        description="displacement bumps in the two stable grains about the equilibrium",
    )


_BUILDERS = {
    "stress_free": _stress_free,
    "stressed_homogeneous": _stressed_homogeneous,
    "stressed_inhomogeneous": _stressed_inhomogeneous,
    "hat_bifurcation": _hat_bifurcation,
    "grain_boundary_static": _grain_boundary_static,
    "grain_boundary_dynamic": _grain_boundary_dynamic,
    "perturbed_dynamic": _perturbed_dynamic,
}


# ---------------------------------------------------------------------------
# drivers
# ---------------------------------------------------------------------------


def _params(spec, params):
    return spec.params if params is None else params


def run_static_case(spec: CaseSpec, n_elements, *, params=None, newton=None) -> RunReport:
    """Solve a static case from the zero dual state on a uniform mesh.

    Raises
    ------
    NewtonError
        Any solver failure, with the case label prepended to the message.
    """
    if spec.kind != "static":
        raise ValueError(f"{spec.name} is not a static case")
    params = _params(spec, params)
    mesh = Mesh1D.uniform(int(n_elements))
    prob = StaticDualProblem(mesh, spec.base, spec.bc, params)
    try:
        dofs, report = newton_solve(prob.residual, prob.jacobian, prob.zero_dofs(), newton or NewtonConfig())
    except Exception as exc:
        if exc.args:
            exc.args = (f"{spec.label}, {n_elements} elements: {exc.args[0]}",) + exc.args[1:]
        raise
    u_q, e_q = prob.recover(dofs)
    u_n = l2_project(u_q, mesh)
    e_n = l2_project(e_q, mesh)
    out = RunReport(spec.label, int(n_elements), params, report, mesh, u_n, e_n, u_q, e_q)
    w = prob.wq
    out.errors["e_dev_l1"] = float(np.sum(w * np.abs(e_q - 1.0)))
    sig = material.stress(e_q)
    out.errors["stress_spread"] = float(sig.max() - sig.min())
    if spec.target is not None:
        ut, et = spec.target
        out.u_target = np.asarray(ut(mesh.nodes), dtype=float)
        out.e_target = np.asarray(et(mesh.nodes), dtype=float)
        out.errors["u_l1"] = l1_error(u_n, ut, mesh)
        out.errors["e_l1"] = l1_error(e_n, et, mesh)
        out.errors["e_l1_points"] = float(np.sum(w * np.abs(e_q - et(prob.xq))))
    return out


def refinement_study(spec: CaseSpec, sizes=None, *, params=None, newton=None):
    """Run ``spec`` on each mesh size; returns the list of reports.

    Cases without a closed-form target get ``u_self`` / ``e_self``: the L1
    distance to the solution on ``spec.reference_elements`` elements.
    """
    sizes = tuple(spec.mesh_sizes if sizes is None else sizes)
    reports = [run_static_case(spec, n, params=params, newton=newton) for n in sizes]
    if spec.reference_elements is not None:
        ref = run_static_case(spec, spec.reference_elements, params=params, newton=newton)
        for r in reports:
            r.errors["u_self"] = l1_difference(r.u_hat, r.mesh, ref.u_hat, ref.mesh)
            r.errors["e_self"] = l1_difference(r.e_hat, r.mesh, ref.e_hat, ref.mesh)
    return reports


def _integrate_strain(E, x, u_left):
    """Cumulative trapezoid in x of every time row, anchored at ``u_left``."""
    inc = 0.5 * (E[:, 1:] + E[:, :-1]) * np.diff(x)
    return np.concatenate([np.zeros((E.shape[0], 1)), np.cumsum(inc, axis=1)], axis=1) + u_left[:, None]


def _cumulative_time_integral(f, t):
    vals = np.asarray(f(t), dtype=float) * np.ones_like(t)
    return np.concatenate([[0.0], np.cumsum(0.5 * (vals[1:] + vals[:-1]) * np.diff(t))])


def measure_wave_speed(report: DynamicRunReport, grain, e_grain, rho0=1.0, margin=0.02):
    """Speed of the right-moving packet inside ``grain = (a, b)``.

    In a region of constant equilibrium strain ``e_grain`` the linearised
    right-moving Riemann invariant is ``r = (e - e_grain) - v / c`` with
    ``c = sqrt(stiffness(e_grain) / rho0)``; left movers do not contribute to
    it.  The speed is the least-squares slope of the centroid of ``r^2``
    against time.

    Returns ``(measured, linear)``.
    """
    c = float(np.sqrt(material.stiffness(e_grain) / rho0))
    x = report.x
    mask = (x > grain[0] + margin) & (x < grain[1] - margin)
    r = (report.e_hat[:, mask] - e_grain) - report.v_hat[:, mask] / c
    r2 = r * r
    centroid = (r2 @ x[mask]) / np.maximum(r2.sum(axis=1), np.finfo(float).tiny)
    slope = np.polyfit(report.t, centroid, 1)[0]
    return float(slope), c


def _departure_time(hist: PrimalHistory, threshold=0.1):
    e0 = hist.strain[0]
    for t, e in zip(hist.times, hist.strain):
        if np.max(np.abs(e - e0)) > threshold:
            return float(t)
    return None


def run_dynamic_case(
    spec: CaseSpec,
    nx=None,
    nt=None,
    T=None,
    *,
    params=None,
    newton=None,
    compare_primal=False,
    primal_elements=None,
) -> DynamicRunReport:
    """Monolithic space-time dual solve of a dynamic case.

    ``e_hat`` and ``v_hat`` are L2-projected onto the grid; ``u_hat`` is
    rebuilt by integrating ``e_hat`` in x from the left-end displacement
    (the time integral of ``v_left``).  With ``compare_primal`` the reference
    primal integrator is run on the same window.
    """
    if spec.kind != "dynamic":
        raise ValueError(f"{spec.name} is not a dynamic case")
    params = _params(spec, params)
    nx = spec.nx if nx is None else int(nx)
    nt = spec.nt if nt is None else int(nt)
    case = spec.dynamic if T is None else dataclasses.replace(spec.dynamic, T=float(T))
    mesh = SpaceTimeMesh.uniform(nx, nt, case.T)
    prob = DynamicDualProblem(mesh, spec.base, case, params)
    try:
        dofs, report = newton_solve(prob.residual, prob.jacobian, prob.zero_dofs(), newton or NewtonConfig())
    except Exception as exc:
        if exc.args:
            exc.args = (f"{spec.label}, {nx}x{nt} grid: {exc.args[0]}",) + exc.args[1:]
        raise
    v_q, e_q = prob.recover(dofs)
    E = spacetime_l2_project(e_q, mesh)
    V = spacetime_l2_project(v_q, mesh)
    U = _integrate_strain(E, mesh.x, _cumulative_time_integral(case.v_left, mesh.t))
    out = DynamicRunReport(spec.label, nx, nt, case.T, params, report, mesh, E, V, U)
    out.stability_threshold = spec.stability_threshold
    if spec.target is not None:
        ut, et = spec.target
        out.u_target = np.broadcast_to(ut(mesh.x), U.shape).copy()
        out.e_target = np.broadcast_to(et(mesh.x), E.shape).copy()
    if spec.equilibrium_strain is not None:
        out.stability_metric = float(np.max(np.abs(e_q - spec.equilibrium_strain(prob.xq))))
    if spec.name == "perturbed_dynamic":
        _, (ea, _, ec) = equal_stress_strains()
        b = GRAIN_BREAKPOINTS
        out.wave_speeds["left_grain"] = measure_wave_speed(out, (b[0], b[1]), ea, case.rho0)
        out.wave_speeds["middle_grain"] = measure_wave_speed(out, (b[2], b[3]), ec, case.rho0)
    if compare_primal:
        pm = Mesh1D.uniform(spec.primal_elements if primal_elements is None else int(primal_elements))
        hist = evolve_primal(case, pm, breakpoints=spec.breakpoints, save_every=10)
        out.primal = hist
        out.primal_departure_time = _departure_time(hist)
    return out
