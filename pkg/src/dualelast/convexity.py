"""Pointwise dual densities of two hyperelastic models and checks of their bounds.

Saint Venant-Kirchhoff::

    g(A, a, B) = sup_{F, y} a.y + A:F + B:P(F) - |y|^4/4 - (G + L/2)/2 |F^T F|^2

Incompressible neo-Hookean in 2-D (shear modulus 1)::

    g(A, a, B, s) = sup_{F, y, p} a.y + s (det F - 1) + A:F + B:(F - p cof F)
                    - |y|^2/2 - |F|^2/2 - p^4/4

The ``y``-suprema are explicit.  The neo-Hookean ``(F, p)``-supremum is
computed exactly: for fixed ``p`` the objective is a concave quadratic in
``F`` when ``|s| < 1``, and what remains is a quartic in ``p``.  The SVK
``F``-supremum is numeric (grid plus witness seeds, then BFGS).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import RegimeMismatch
from .material import SvkParams, cofactor_2d

__all__ = [
    "SvkDualPoint",
    "NeoHookeanDualPoint",
    "svk_objective",
    "svk_objective_grad",
    "g_svk",
    "svk_reduced",
    "proof_kernel",
    "svk_case",
    "svk_case_constants",
    "proof_kernel_witness",
    "svk_witness_value",
    "svk_witness_bound",
    "svk_lower_bound_constant",
    "neo_hookean_objective",
    "neo_hookean_h",
    "g_neo_hookean",
    "g_neo_hookean_numeric",
    "neo_hookean_ray_value",
    "neo_hookean_regime",
    "neo_hookean_witness",
    "neo_hookean_lower_bound",
    "neo_hookean_upper_bound",
    "NEO_LOWER_CONSTANT",
    "INFINITY_THRESHOLD",
    "point_hash",
    "sample_svk_points",
    "sample_neo_hookean_points",
    "run_bound_checks",
    "run_convexity_checks",
]

INFINITY_THRESHOLD = 1e12
NEO_LOWER_CONSTANT = 1.0 / 516.0


@dataclass(frozen=True)
class SvkDualPoint:
    A: np.ndarray
    a: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A, a, B = (np.asarray(v, dtype=float) for v in (self.A, self.a, self.B))
        d = a.size
        if A.shape != (d, d) or B.shape != (d, d):
            raise ValueError("A and B must be d x d with d = len(a)")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(a)) and np.all(np.isfinite(B))):
            raise ValueError("dual point must be finite")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "B", B)

    @property
    def dim(self):
        return self.a.size

    def combine(self, other, t):
        return SvkDualPoint(t * self.A + (1 - t) * other.A, t * self.a + (1 - t) * other.a, t * self.B + (1 - t) * other.B)


@dataclass(frozen=True)
class NeoHookeanDualPoint:
    A: np.ndarray
    a: np.ndarray
    B: np.ndarray
    s: float

    def __post_init__(self):
        A, a, B = (np.asarray(v, dtype=float) for v in (self.A, self.a, self.B))
        if A.shape != (2, 2) or B.shape != (2, 2) or a.shape != (2,):
            raise ValueError("neo-Hookean dual points are two-dimensional")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(a)) and np.all(np.isfinite(B)) and np.isfinite(self.s)):
            raise ValueError("dual point must be finite")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "s", float(self.s))

    def combine(self, other, t):
        return NeoHookeanDualPoint(
            t * self.A + (1 - t) * other.A,
            t * self.a + (1 - t) * other.a,
            t * self.B + (1 - t) * other.B,
            t * self.s + (1 - t) * other.s,
        )


def _fro(M):
    return float(np.sqrt(np.sum(np.asarray(M) ** 2)))


def point_hash(*arrays):
    """Short deterministic hash of the exact binary values of a dual point."""
    h = hashlib.sha256()
    for arr in arrays:
        h.update(np.ascontiguousarray(np.asarray(arr, dtype="<f8")).tobytes())
    return h.hexdigest()[:12]


# ---------------------------------------------------------------------------
# Saint Venant-Kirchhoff
# ---------------------------------------------------------------------------


def _svk_consts(params: SvkParams):
    G, L, d = params.shear_modulus, params.lame, params.dim
    return G, L, d, G + 0.5 * L * d, 0.5 * (G + 0.5 * L)


def svk_objective(F, A, B, params: SvkParams):
    """``A:F + B:P(F) - (G + L/2)/2 |F^T F|^2`` for one ``F`` or a stack ``(..., d, d)``."""
    G, L, _, m, k = _svk_consts(params)
    F = np.asarray(F, dtype=float)
    C = np.swapaxes(F, -1, -2) @ F
    FC = F @ C
    n2 = np.sum(F * F, axis=(-2, -1))
    AF = np.sum(A * F, axis=(-2, -1))
    BF = np.sum(B * F, axis=(-2, -1))
    BP = G * np.sum(B * FC, axis=(-2, -1)) + 0.5 * L * n2 * BF - m * BF
    return AF + BP - k * np.sum(C * C, axis=(-2, -1))


def svk_objective_grad(F, A, B, params: SvkParams):
    """Gradient of :func:`svk_objective` with respect to a single ``F``."""
    G, L, _, m, k = _svk_consts(params)
    F = np.asarray(F, dtype=float)
    C = F.T @ F
    return (
        A
        + G * (B @ C + F @ B.T @ F + F @ F.T @ B)
        + L * np.sum(B * F) * F
        + 0.5 * L * np.sum(F * F) * B
        - m * B
        - 4.0 * k * F @ C
    )


def svk_reduced(point: SvkDualPoint, params: SvkParams):
    """Normalised data ``(A_tilde, B_hat)`` of the lower-bound argument.

    ``A_tilde = (A - (G + L d/2) B) / (2G + L)`` and ``B_hat = G B / (2G + L)``;
    for ``L = 0`` the objective equals ``2G * proof_kernel(F, A_tilde, B_hat)``.
    """
    G, L, _, m, _ = _svk_consts(params)
    return (point.A - m * point.B) / (2 * G + L), G * point.B / (2 * G + L)


def proof_kernel(F, A_tilde, B_hat):
    """``A_tilde:F + B_hat:(F F^T F) - |F^T F|^2 / 4``."""
    F = np.asarray(F, dtype=float)
    C = np.swapaxes(F, -1, -2) @ F
    return (
        np.sum(A_tilde * F, axis=(-2, -1))
        + np.sum(B_hat * (F @ C), axis=(-2, -1))
        - 0.25 * np.sum(C * C, axis=(-2, -1))
    )


def svk_case(A_tilde, B_hat, d):
    """Regime (1, 2 or 3) of the three-way case split on ``|B_hat|^3`` against ``|A_tilde|``."""
    at, b3 = _fro(A_tilde), _fro(B_hat) ** 3
    if b3 <= 27.0 / 512.0 * at:
        return 1
    if b3 <= 8.0 * d / 9.0 * at:
        return 2
    return 3


def svk_case_constants(d):
    """Constants ``c_k`` with ``kernel(witness_k) >= c_k (|A_tilde|^{4/3} + |B_hat|^4)``."""
    r = 9.0 / (8.0 * d)
    c2 = (2.0 / (3.0 * np.sqrt(3.0)) - np.sqrt(512.0 / 27.0) / 36.0) * 0.5 * min(r ** (1 / 6), r**1.5)
    c3 = 27.0 / (16.0 * d) * min(1.0, (8.0 * d / 9.0) ** (4.0 / 3.0))
    return {1: 3.0 / 16.0, 2: c2, 3: c3}


def proof_kernel_witness(A_tilde, B_hat, case):
    """Witness ``F`` of the given regime and the kernel value there.

    Raises
    ------
    RegimeMismatch
        If ``(A_tilde, B_hat)`` is not in the regime of ``case``.
    """
    A_tilde = np.asarray(A_tilde, dtype=float)
    B_hat = np.asarray(B_hat, dtype=float)
    d = A_tilde.shape[0]
    actual = svk_case(A_tilde, B_hat, d)
    if case not in (1, 2, 3):
        raise ValueError("case must be 1, 2 or 3")
    if actual != case:
        raise RegimeMismatch(f"point lies in regime {actual}, not {case}")
    at, b = _fro(A_tilde), _fro(B_hat)
    if case == 1:
        F = A_tilde * at ** (-2.0 / 3.0) if at > 0 else np.zeros_like(A_tilde)
    elif case == 2:
        F = A_tilde / (np.sqrt(3.0) * np.sqrt(b * at))
    else:
        F = 3.0 * B_hat
    return F, float(proof_kernel(F, A_tilde, B_hat))


def _svk_witness_F(point, params, case):
    At, Bh = svk_reduced(point, params)
    F, _ = proof_kernel_witness(At, Bh, case)
    return F


def svk_witness_value(point: SvkDualPoint, params: SvkParams, case):
    """``3/4 |a|^{4/3}`` plus the objective at the regime-``case`` witness; never above :func:`g_svk`."""
    F = _svk_witness_F(point, params, case)
    return 0.75 * _fro(point.a) ** (4.0 / 3.0) + float(svk_objective(F, point.A, point.B, params))


def svk_witness_bound(point: SvkDualPoint, params: SvkParams, case):
    """Lower bound the regime-``case`` witness must beat.

    ``3/4 |a|^{4/3} + 2G c_case (|A_tilde|^{4/3} + |B_hat|^4)``.  Exact only
    for ``L = 0``, where the objective reduces to the proof kernel.
    """
    if params.lame != 0:
        raise ValueError("witness bounds are stated for L = 0")
    At, Bh = svk_reduced(point, params)
    c = svk_case_constants(params.dim)[case]
    return 0.75 * _fro(point.a) ** (4.0 / 3.0) + 2 * params.shear_modulus * c * (_fro(At) ** (4 / 3) + _fro(Bh) ** 4)


def svk_lower_bound_constant(params: SvkParams, eps=1.0):
    """Explicit ``c`` with ``g >= c (|a|^{4/3} + |A|^{4/3} + |B|^4) - 1/c`` for ``L = 0``.

    Uses ``|A| <= 2G |A_tilde| + G |B|``, ``(x + y)^{4/3} <= 2^{1/3} (x^{4/3} + y^{4/3})``
    and Young's inequality ``x^{4/3} <= eps x^4 + (2/3)(3 eps)^{-1/2}``.
    """
    if params.lame != 0:
        raise ValueError("the explicit constant is derived for L = 0")
    G = params.shear_modulus
    cstar = min(svk_case_constants(params.dim).values())
    alpha = 2 ** (1 / 3) * (2 * G) ** (4 / 3)
    beta = 2 ** (1 / 3) * G ** (4 / 3)
    young = (2.0 / 3.0) / np.sqrt(3.0 * eps)
    # |B_hat|^4 = |B|^4 / 16
    return float(min(0.75, 2 * G * cstar / alpha, 2 * G * cstar / (16.0 * (beta * eps + 1.0)), 1.0 / np.sqrt(beta * young)))


def _svk_seeds(point, params, grid_points, radius, rng):
    d = point.dim
    if d == 2:
        axis = np.linspace(-radius, radius, grid_points)
        grid = np.stack(np.meshgrid(axis, axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 2, 2)
        grid = grid[np.sum(grid * grid, axis=(1, 2)) <= radius**2]
    else:
        raw = rng.standard_normal((4096, d, d))
        raw *= (radius * rng.random(4096) ** (1.0 / (d * d)) / np.sqrt(np.sum(raw * raw, axis=(1, 2))))[:, None, None]
        grid = raw
    extra = [np.zeros((d, d))]
    At, Bh = svk_reduced(point, params)
    for case in (1, 2, 3):
        try:
            extra.append(proof_kernel_witness(At, Bh, case)[0])
        except RegimeMismatch:
            pass
    extra.append(3.0 * Bh)
    if _fro(At) > 0:
        extra.append(At * _fro(At) ** (-2.0 / 3.0))
    return np.concatenate([grid, np.array(extra)], axis=0), len(extra)


def g_svk(point: SvkDualPoint, params: SvkParams | None = None, *, grid_points=17, radius=5.0, n_starts=8, seed=0, return_maximizer=False):
    """Numeric SVK dual density.

    Seeds: a ``grid_points``-per-axis grid on ``|F| <= radius`` (``d = 2``)
    or 4096 seeded random points in that ball (``d = 3``), plus the
    witnesses of the lower-bound argument.  BFGS then refines the best
    ``n_starts`` seeds and every witness seed.  The result is never below
    the objective at any seed.
    """
    params = params or SvkParams(dim=point.dim)
    if params.dim != point.dim:
        raise ValueError("params.dim does not match the dual point")
    d = point.dim
    A, B = point.A, point.B
    rng = np.random.default_rng(seed)
    seeds, n_extra = _svk_seeds(point, params, grid_points, radius, rng)
    vals = svk_objective(seeds, A, B, params)
    order = np.argsort(-vals[: len(seeds) - n_extra])[:n_starts]
    starts = list(seeds[order]) + list(seeds[len(seeds) - n_extra :])
    best_val = float(np.max(vals))
    best_F = seeds[int(np.argmax(vals))]

    def neg(x):
        F = x.reshape(d, d)
        return -float(svk_objective(F, A, B, params)), -svk_objective_grad(F, A, B, params).ravel()

    for F0 in starts:
        res = minimize(neg, np.asarray(F0, dtype=float).ravel(), jac=True, method="BFGS", options={"gtol": 1e-10, "maxiter": 500})
        if -res.fun > best_val:
            best_val = float(-res.fun)
            best_F = res.x.reshape(d, d)
    g = 0.75 * _fro(point.a) ** (4.0 / 3.0) + best_val
    return (g, best_F) if return_maximizer else g


# ---------------------------------------------------------------------------
# incompressible neo-Hookean (d = 2)
# ---------------------------------------------------------------------------

# cof acts linearly on vec(F) = (F11, F12, F21, F22)
_COF = np.array([[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]], dtype=float)


def neo_hookean_objective(F, p, A, B, s):
    """``s det F + A:F + B:(F - p cof F) - |F|^2/2 - p^4/4`` (no ``y`` part, no ``-s``)."""
    F = np.asarray(F, dtype=float)
    p = np.asarray(p, dtype=float)
    det = F[..., 0, 0] * F[..., 1, 1] - F[..., 0, 1] * F[..., 1, 0]
    cof = cofactor_2d(F)
    return (
        s * det
        + np.sum((A + B) * F, axis=(-2, -1))
        - p * np.sum(B * cof, axis=(-2, -1))
        - 0.5 * np.sum(F * F, axis=(-2, -1))
        - 0.25 * p**4
    )


def neo_hookean_ray_value(point: NeoHookeanDualPoint, t):
    """Objective of ``h`` on the ray used to prove unboundedness for ``|s| > 1``.

    ``F = t Id`` when ``s > 1`` and ``F = t diag(1, -1)`` when ``s < -1``; ``p = 0``.
    """
    D = np.eye(2) if point.s >= 0 else np.diag([1.0, -1.0])
    return float(neo_hookean_objective(t * D, 0.0, point.A, point.B, point.s))


def _ray_unbounded(point):
    for t in np.geomspace(1.0, 1e12, 49):
        v = neo_hookean_ray_value(point, t)
        if v > INFINITY_THRESHOLD:
            return True
    return False


def neo_hookean_h(A, B, s):
    """Exact ``h(A, B, s)`` for ``|s| <= 1``; returns ``(h, F_star, p_star)``.

    For fixed ``p`` the maximiser solves ``F - s cof F = c(p)`` with
    ``c(p) = A + B - p cof B``, and the value is ``c:F/2``, a quadratic
    ``q0 + q1 p + q2 p^2``.  The ``p``-supremum of ``q(p) - p^4/4`` is attained
    at a real root of ``q1 + 2 q2 p - p^3``.  ``h`` is ``+inf`` at ``|s| = 1``
    when ``c(p)`` can reach the kernel of ``I - s cof``.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if abs(s) > 1:
        return np.inf, None, None
    M = np.eye(4) - s * _COF
    c0 = (A + B).ravel()
    c1 = cofactor_2d(B).ravel()
    if abs(s) < 1:
        Minv = np.linalg.inv(M)
    else:
        w, V = np.linalg.eigh(M)
        null = V[:, np.abs(w) < 1e-12]
        scale = max(1.0, np.linalg.norm(c0), np.linalg.norm(c1))
        if np.any(np.abs(null.T @ c0) > 1e-12 * scale) or np.any(np.abs(null.T @ c1) > 1e-12 * scale):
            return np.inf, None, None
        Minv = np.linalg.pinv(M)
    q0 = 0.5 * c0 @ Minv @ c0
    q1 = -c0 @ Minv @ c1
    q2 = 0.5 * c1 @ Minv @ c1
    roots = np.roots([-1.0, 0.0, 2.0 * q2, q1])
    cand = roots[np.abs(roots.imag) < 1e-9 * max(1.0, np.max(np.abs(roots)))].real
    if cand.size == 0:
        cand = roots.real
    vals = q0 + q1 * cand + q2 * cand**2 - 0.25 * cand**4
    k = int(np.argmax(vals))
    p = float(cand[k])
    F = (Minv @ (c0 - p * c1)).reshape(2, 2)
    return float(vals[k]), F, p


def g_neo_hookean(point: NeoHookeanDualPoint):
    """Neo-Hookean dual density; ``+inf`` for ``|s| > 1`` (confirmed along the proof's ray)."""
    s = point.s
    if abs(s) > 1:
        if not _ray_unbounded(point):
            raise RuntimeError(f"ray test failed to confirm g = +inf at s = {s}")
        return np.inf
    h, _, _ = neo_hookean_h(point.A, point.B, s)
    return 0.5 * float(point.a @ point.a) - s + h


def g_neo_hookean_numeric(point: NeoHookeanDualPoint, *, n_starts=32, seed=0):
    """Brute-force multistart oracle over ``(F, p)``; for cross-checking only."""
    A, B, s = point.A, point.B, point.s
    rng = np.random.default_rng(seed)

    def neg(x):
        return -float(neo_hookean_objective(x[:4].reshape(2, 2), x[4], A, B, s))

    scale = 1.0 + _fro(A) + _fro(B) ** 2
    best = -np.inf
    starts = [np.zeros(5)] + [rng.standard_normal(5) * scale for _ in range(n_starts)]
    for x0 in starts:
        res = minimize(neg, x0, method="BFGS", options={"gtol": 1e-10, "maxiter": 2000})
        best = max(best, -res.fun)
    return 0.5 * float(point.a @ point.a) - s + best


def neo_hookean_regime(point: NeoHookeanDualPoint):
    """``"A"`` when ``|A+B| >= |B|^2 / (4 sqrt 8)``, else ``"B"``."""
    return "A" if _fro(point.A + point.B) >= _fro(point.B) ** 2 / (4.0 * np.sqrt(8.0)) else "B"


def neo_hookean_witness(point: NeoHookeanDualPoint, regime=None):
    """Witness ``(F, p)``, its objective value and the regime inequality it must satisfy.

    Returns ``(F, p, value, bound)`` where ``value`` is the ``h``-objective at
    the witness and ``bound`` is ``|A+B|^2/4`` (regime A) or ``|B|^4/32``
    (regime B).

    Raises
    ------
    RegimeMismatch
    """
    actual = neo_hookean_regime(point)
    regime = regime or actual
    if regime != actual:
        raise RegimeMismatch(f"point lies in regime {actual}, not {regime}")
    if abs(point.s) > 1:
        raise RegimeMismatch("witnesses need |s| <= 1")
    A, B = point.A, point.B
    if regime == "A":
        F, p = 0.5 * (A + B), 0.0
        bound = 0.25 * _fro(A + B) ** 2
    else:
        nb = _fro(B)
        # cof(cof F) = F in 2-D
        F, p = cofactor_2d(-nb * B / np.sqrt(8.0)), nb / np.sqrt(2.0)
        bound = nb**4 / 32.0
    return F, p, float(neo_hookean_objective(F, p, A, B, point.s)), bound


def neo_hookean_lower_bound(point: NeoHookeanDualPoint, c=NEO_LOWER_CONSTANT):
    return c * (float(point.a @ point.a) + _fro(point.A + point.B) ** 2 + _fro(point.B) ** 4) - 1.0


def neo_hookean_upper_bound(point: NeoHookeanDualPoint, C=1.0):
    r = 1.0 - abs(point.s)
    if r <= 0:
        return np.inf
    return C * (float(point.a @ point.a) + _fro(point.A + point.B) ** 2 / r + _fro(point.B) ** 4 / r**2 + 1.0)


# ---------------------------------------------------------------------------
# sampling and report rows
# ---------------------------------------------------------------------------


def _log_scale(rng, lo, hi, size=None):
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size))


def sample_svk_points(n, rng, d=2, params=None):
    """Random SVK dual points spread over several decades so all regimes occur.

    Every third point puts ``A`` close to ``(G + L d/2) B`` so that
    ``A_tilde`` is small and the large-``B`` regime is exercised.
    """
    params = params or SvkParams(dim=d)
    m = params.shear_modulus + 0.5 * params.lame * d
    pts = []
    for i in range(n):
        B = rng.standard_normal((d, d)) * _log_scale(rng, 1e-2, 1.5)
        A = rng.standard_normal((d, d)) * _log_scale(rng, 1e-2, 5.0)
        if i % 3 == 2:
            A = m * B + rng.standard_normal((d, d)) * _log_scale(rng, 1e-4, 1e-1)
        a = rng.standard_normal(d) * _log_scale(rng, 1e-2, 5.0)
        pts.append(SvkDualPoint(A, a, B))
    return pts


def sample_neo_hookean_points(n, rng, s_range=(-1.0, 1.0)):
    """Random neo-Hookean dual points; every third one has ``A`` close to ``-B`` (regime B)."""
    pts = []
    for i in range(n):
        A = rng.standard_normal((2, 2)) * _log_scale(rng, 1e-2, 5.0)
        B = rng.standard_normal((2, 2)) * _log_scale(rng, 1e-2, 3.0)
        if i % 3 == 2:
            A = -B + rng.standard_normal((2, 2)) * _log_scale(rng, 1e-4, 1e-2)
        a = rng.standard_normal(2) * _log_scale(rng, 1e-2, 5.0)
        pts.append(NeoHookeanDualPoint(A, a, B, rng.uniform(*s_range)))
    return pts


def run_bound_checks(samples=100, seed=7, svk_params=None):
    """Evaluate ``g`` and the lower/upper bounds on seeded random points.

    Returns a list of row dicts with keys ``model, index, point, regime, g,
    lower, upper, witness, witness_bound, margin_lower, margin_upper,
    violation``.  SVK rows use ``L = 0`` (see :func:`svk_witness_bound`).
    Neo-Hookean rows cover ``|s| <= 1`` (upper bound checked for ``|s| <= 0.9``)
    plus points with ``|s| > 1`` that must give ``+inf``.
    """
    rng = np.random.default_rng(seed)
    params = svk_params or SvkParams(shear_modulus=1.0, lame=0.0, dim=2)
    rows = []
    c_glob = svk_lower_bound_constant(params)
    for i, pt in enumerate(sample_svk_points(samples, rng, params.dim, params)):
        At, Bh = svk_reduced(pt, params)
        case = svk_case(At, Bh, params.dim)
        g = g_svk(pt, params)
        wv = svk_witness_value(pt, params, case)
        wb = svk_witness_bound(pt, params, case)
        lower = c_glob * (_fro(pt.a) ** (4 / 3) + _fro(pt.A) ** (4 / 3) + _fro(pt.B) ** 4) - 1.0 / c_glob
        bad = not (wv >= wb - 1e-12 * max(1.0, abs(wb)) and g >= wv - 1e-9 and g >= lower)
        rows.append(
            dict(model="svk", index=i, point=point_hash(pt.A, pt.a, pt.B), regime=str(case), g=g, lower=lower,
                 upper=np.nan, witness=wv, witness_bound=wb, margin_lower=g - lower, margin_upper=np.nan, violation=bad)
        )
    for i, pt in enumerate(sample_neo_hookean_points(samples, rng)):
        g = g_neo_hookean(pt)
        F, p, wv, wb = neo_hookean_witness(pt)
        w_total = 0.5 * float(pt.a @ pt.a) - pt.s + wv
        lower = neo_hookean_lower_bound(pt)
        upper = neo_hookean_upper_bound(pt) if abs(pt.s) <= 0.9 else np.inf
        bad = not (wv >= wb - 1e-12 * max(1.0, wb) and g >= w_total - 1e-9 and g >= lower and g <= upper)
        rows.append(
            dict(model="neo_hookean", index=i, point=point_hash(pt.A, pt.a, pt.B, [pt.s]), regime=neo_hookean_regime(pt),
                 g=g, lower=lower, upper=upper, witness=w_total, witness_bound=wb, margin_lower=g - lower,
                 margin_upper=upper - g, violation=bad)
        )
    for i, pt in enumerate(sample_neo_hookean_points(samples // 4 or 1, rng, s_range=(1.0, 3.0))):
        sign = -1.0 if i % 2 else 1.0
        pt = NeoHookeanDualPoint(pt.A, pt.a, pt.B, sign * max(pt.s, 1.0 + 1e-3))
        g = g_neo_hookean(pt)
        rows.append(
            dict(model="neo_hookean_infinite", index=i, point=point_hash(pt.A, pt.a, pt.B, [pt.s]), regime="|s|>1",
                 g=g, lower=np.nan, upper=np.nan, witness=np.nan, witness_bound=np.nan, margin_lower=np.nan,
                 margin_upper=np.nan, violation=not np.isposinf(g))
        )
    return rows


def run_convexity_checks(samples=100, seed=7, svk_params=None, ts=(0.25, 0.5, 0.75), tol=1e-6):
    """Midpoint-type convexity inequality on seeded random pairs for both densities.

    Returns a list of row dicts with ``model, index, t, lhs, rhs, violation``.
    """
    rng = np.random.default_rng(seed + 1)
    params = svk_params or SvkParams(shear_modulus=1.0, lame=0.0, dim=2)
    rows = []
    p1 = sample_svk_points(samples, rng, params.dim, params)
    p2 = sample_svk_points(samples, rng, params.dim, params)
    for i, (x1, x2) in enumerate(zip(p1, p2)):
        g1, g2 = g_svk(x1, params), g_svk(x2, params)
        for t in ts:
            lhs = g_svk(x1.combine(x2, t), params)
            rhs = t * g1 + (1 - t) * g2
            rows.append(dict(model="svk", index=i, t=t, lhs=lhs, rhs=rhs, violation=lhs > rhs + tol))
    q1 = sample_neo_hookean_points(samples, rng)
    q2 = sample_neo_hookean_points(samples, rng)
    for i, (x1, x2) in enumerate(zip(q1, q2)):
        g1, g2 = g_neo_hookean(x1), g_neo_hookean(x2)
        for t in ts:
            lhs = g_neo_hookean(x1.combine(x2, t))
            rhs = t * g1 + (1 - t) * g2
            rows.append(dict(model="neo_hookean", index=i, t=t, lhs=lhs, rhs=rhs, violation=lhs > rhs + tol * max(1.0, abs(rhs))))
    return rows
