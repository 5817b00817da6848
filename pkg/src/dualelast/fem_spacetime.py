"""Dual elastodynamics on the space-time rectangle [0, 1] x [0, T].

Unknowns are the nodal values of ``L`` (pairs with momentum balance) and
``P`` (pairs with compatibility ``e_t = v_x``) on a bilinear quad grid.  Node
``(i, j)`` at ``(x_i, t_j)`` has index ``j * (nx + 1) + i``; the full dof
vector is ``[L, P]``.

Dual Dirichlet data (homogeneous) are imposed wherever the paired primal
quantity is not prescribed:

* ``L = 0`` on ``x = 0``, ``x = 1`` (stress not given) and on ``t = T``;
* ``P = 0`` on ``t = T`` (strain not given).

With ``a = rho0 L_t - P_x`` and ``b = P_t - stiffness(e_hat) L_x`` the
Jacobian is ``-(Ba^T W/c_v Ba + Bb^T W/g' Bb)``, symmetric and negative
semidefinite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import material
from .basestate import DynamicBaseState
from .dtp import AuxPotentialParams, DynamicPointDual, PointBase, dtp_dynamic, dtp_dynamic_derivatives
from .errors import DtPError
from .fem_static import gauss_legendre

__all__ = [
    "SpaceTimeMesh",
    "DynamicCase",
    "DynamicDualDofs",
    "DynamicDualProblem",
    "assemble_dynamic_residual",
    "assemble_dynamic_jacobian",
    "apply_dynamic_dual_bcs",
    "spacetime_l2_project",
]


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


class SpaceTimeMesh:
    """Structured grid of bilinear quads over ``[0, 1] x [0, T]``.

    Parameters
    ----------
    x_nodes, t_nodes : array_like
        Strictly increasing grid lines; ``x`` must span ``[0, 1]`` and ``t``
        must start at 0.
    n_quad : int
        Gauss points per direction.
    """

    def __init__(self, x_nodes, t_nodes, n_quad=2):
        x = np.asarray(x_nodes, dtype=float)
        t = np.asarray(t_nodes, dtype=float)
        for name, g in (("x", x), ("t", t)):
            if g.ndim != 1 or g.size < 2:
                raise ValueError(f"{name} grid needs at least two lines")
            if np.any(np.diff(g) <= 0):
                raise ValueError(f"{name} grid lines must be strictly increasing")
        if x[0] != 0.0 or x[-1] != 1.0:
            raise ValueError("x grid must span [0, 1]")
        if t[0] != 0.0:
            raise ValueError("t grid must start at 0")
        self.x = x
        self.t = t
        self.n_quad = int(n_quad)
        self.xi, self.wi = gauss_legendre(self.n_quad)
        self._cache = None

    @classmethod
    def uniform(cls, nx, nt, T, n_quad=2):
        if not T > 0:
            raise ValueError("T must be > 0")
        return cls(np.linspace(0.0, 1.0, int(nx) + 1), np.linspace(0.0, float(T), int(nt) + 1), n_quad)

    @property
    def nx(self):
        return self.x.size - 1

    @property
    def nt(self):
        return self.t.size - 1

    @property
    def T(self):
        return float(self.t[-1])

    @property
    def n_nodes(self):
        return self.x.size * self.t.size

    def node(self, i, j):
        return j * (self.nx + 1) + i

    def coordinates(self):
        """Node coordinates ``(X, T)`` as flat arrays in node order."""
        X, Tt = np.meshgrid(self.x, self.t)
        return X.ravel(), Tt.ravel()

    def _line_points(self, grid):
        h = np.diff(grid)
        pts = grid[:-1, None] + h[:, None] * self.xi[None, :]
        w = h[:, None] * self.wi[None, :]
        return pts, w

    def point_matrices(self):
        """Sparse ``(N, N_x, N_t)`` over volume quadrature points and their data.

        Returns ``(N, Nx, Nt, xq, tq, wq)``.  Points are ordered by element
        (element ``(ex, et)`` is number ``et * nx + ex``) then by local point
        ``qt * n_quad + qx``.
        """
        if self._cache is not None:
            return self._cache
        nq = self.n_quad
        xi = self.xi
        hx = np.diff(self.x)
        ht = np.diff(self.t)
        ex, et, qt, qx = np.meshgrid(np.arange(self.nx), np.arange(self.nt), np.arange(nq), np.arange(nq), indexing="ij")
        # reorder to (et, ex, qt, qx)
        ex, et, qt, qx = (a.transpose(1, 0, 2, 3).ravel() for a in (ex, et, qt, qx))
        sx = xi[qx]
        st = xi[qt]
        xq = self.x[ex] + hx[ex] * sx
        tq = self.t[et] + ht[et] * st
        wq = hx[ex] * ht[et] * self.wi[qx] * self.wi[qt]
        n_pts = xq.size
        rows, cols, vN, vX, vT = [], [], [], [], []
        for di, dj in ((0, 0), (1, 0), (0, 1), (1, 1)):
            nx_f = sx if di else 1.0 - sx
            nt_f = st if dj else 1.0 - st
            dnx = (1.0 if di else -1.0) / hx[ex]
            dnt = (1.0 if dj else -1.0) / ht[et]
            rows.append(np.arange(n_pts))
            cols.append(self.node(ex + di, et + dj))
            vN.append(nx_f * nt_f)
            vX.append(dnx * nt_f)
            vT.append(nx_f * dnt)
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        shape = (n_pts, self.n_nodes)
        mats = [sp.csr_matrix((np.concatenate(v), (rows, cols)), shape=shape) for v in (vN, vX, vT)]
        self._cache = (*mats, xq, tq, wq)
        return self._cache

    def initial_edge(self):
        """Shape matrix and points on ``t = 0`` using the volume x-points.

        Sharing the x-points with the volume rule makes the discrete
        integration by parts in time exact, so equilibrium data give a
        residual at round-off level.
        """
        xq, w = self._line_points(self.x)
        xq, w = xq.ravel(), w.ravel()
        k = np.clip(np.searchsorted(self.x, xq, side="right") - 1, 0, self.nx - 1)
        s = (xq - self.x[k]) / np.diff(self.x)[k]
        rows = np.concatenate([np.arange(xq.size)] * 2)
        cols = np.concatenate([self.node(k, 0), self.node(k + 1, 0)])
        vals = np.concatenate([1.0 - s, s])
        return sp.csr_matrix((vals, (rows, cols)), shape=(xq.size, self.n_nodes)), xq, w

    def lateral_edge(self, side):
        """Shape matrix and points on ``x = 0`` (``side = 0``) or ``x = 1`` (``side = 1``)."""
        i = 0 if side == 0 else self.nx
        tq, w = self._line_points(self.t)
        tq, w = tq.ravel(), w.ravel()
        k = np.clip(np.searchsorted(self.t, tq, side="right") - 1, 0, self.nt - 1)
        s = (tq - self.t[k]) / np.diff(self.t)[k]
        rows = np.concatenate([np.arange(tq.size)] * 2)
        cols = np.concatenate([self.node(i, k), self.node(i, k + 1)])
        vals = np.concatenate([1.0 - s, s])
        return sp.csr_matrix((vals, (rows, cols)), shape=(tq.size, self.n_nodes)), tq, w


@dataclass
class DynamicCase:
    """Initial and boundary data for 1-D elastodynamics in first-order form.

    ``e0(x)``, ``v0(x)`` are the initial strain and velocity; ``v_left(t)``,
    ``v_right(t)`` the end velocities.
    """

    e0: Callable
    v0: Callable = _zero
    v_left: Callable = _zero
    v_right: Callable = _zero
    T: float = 1.0
    rho0: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.T) and self.T > 0):
            raise ValueError("T must be > 0")
        if not (np.isfinite(self.rho0) and self.rho0 > 0):
            raise ValueError("rho0 must be > 0")


@dataclass
class DynamicDualDofs:
    L: np.ndarray
    P: np.ndarray

    @classmethod
    def zeros(cls, mesh: SpaceTimeMesh):
        return cls(np.zeros(mesh.n_nodes), np.zeros(mesh.n_nodes))


def dirichlet_masks(mesh: SpaceTimeMesh):
    """Boolean masks ``(L_fixed, P_fixed)`` over nodes."""
    X, Tt = mesh.coordinates()
    top = np.zeros(mesh.n_nodes, dtype=bool)
    top[mesh.node(np.arange(mesh.nx + 1), mesh.nt)] = True
    side = np.zeros(mesh.n_nodes, dtype=bool)
    j = np.arange(mesh.nt + 1)
    side[mesh.node(0, j)] = True
    side[mesh.node(mesh.nx, j)] = True
    return top | side, top.copy()


def free_index(mesh: SpaceTimeMesh):
    """Indices into the full ``[L, P]`` vector of the free dofs."""
    fixed_L, fixed_P = dirichlet_masks(mesh)
    return np.flatnonzero(~np.concatenate([fixed_L, fixed_P]))


def apply_dynamic_dual_bcs(residual, jacobian, mesh: SpaceTimeMesh):
    """Restrict a full residual / Jacobian to the free dofs.

    Primal data enter the residual as boundary integrals, so the only
    action here is to drop rows and columns of dual-Dirichlet dofs.
    """
    keep = free_index(mesh)
    R = None if residual is None else np.asarray(residual)[keep]
    J = None if jacobian is None else sp.csr_matrix(jacobian)[keep][:, keep]
    return R, J


class DynamicDualProblem:
    """Residual/Jacobian evaluator for the space-time dual problem."""

    def __init__(self, mesh: SpaceTimeMesh, base: DynamicBaseState, case: DynamicCase, params: AuxPotentialParams):
        if not np.isclose(mesh.T, case.T, rtol=1e-12, atol=0.0):
            raise ValueError(f"mesh final time {mesh.T} does not match case T = {case.T}")
        if params.rho0 != case.rho0:
            params = AuxPotentialParams(params.c_u, params.c_e, params.c_v, case.rho0, params.trust_radius)
        self.mesh = mesh
        self.base = base
        self.case = case
        self.params = params
        N, Nx, Nt, xq, tq, wq = mesh.point_matrices()
        self.xq, self.tq, self.wq = xq, tq, wq
        shape = np.broadcast(xq, tq).shape
        self.v_bar = np.broadcast_to(np.asarray(base.v_bar(xq, tq), dtype=float), shape).copy()
        self.e_bar = np.broadcast_to(np.asarray(base.e_bar(xq, tq), dtype=float), shape).copy()
        zero = sp.csr_matrix(N.shape)
        self._L_t = sp.hstack([Nt, zero]).tocsr()
        self._L_x = sp.hstack([Nx, zero]).tocsr()
        self._P_t = sp.hstack([zero, Nt]).tocsr()
        self._P_x = sp.hstack([zero, Nx]).tocsr()
        self.free = free_index(mesh)
        self.n_full = 2 * mesh.n_nodes
        self.n_free = self.free.size

        rho = params.rho0
        n = mesh.n_nodes
        N0, x0, w0 = mesh.initial_edge()
        NL, tl, wl = mesh.lateral_edge(0)
        NR, tr, wr = mesh.lateral_edge(1)
        load_L = -rho * (N0.T @ (w0 * case.v0(x0)))
        load_P = NL.T @ (wl * case.v_left(tl)) - NR.T @ (wr * case.v_right(tr)) - N0.T @ (w0 * case.e0(x0))
        self._load = np.concatenate([load_L, load_P])
        assert self._load.size == 2 * n

    def full_vector(self, free):
        full = np.zeros(self.n_full)
        full[self.free] = free
        return full

    def dofs(self, free):
        full = self.full_vector(free)
        n = self.mesh.n_nodes
        return DynamicDualDofs(full[:n], full[n:])

    def point_dual(self, free):
        full = self.full_vector(free)
        return DynamicPointDual(
            L_t=self._L_t @ full, L_x=self._L_x @ full, P_t=self._P_t @ full, P_x=self._P_x @ full
        )

    def point_base(self):
        return PointBase(u_bar=self.v_bar, e_bar=self.e_bar)

    def recover(self, free):
        """DtP fields ``(v_hat, e_hat)`` at the volume quadrature points."""
        try:
            return dtp_dynamic(self.point_dual(free), self.point_base(), self.params)
        except DtPError as exc:
            idx = exc.index
            if idx is None or len(idx) == 0:
                raise
            k = int(idx[0])
            msg = f"{exc} (first at x = {self.xq[k]:.6g}, t = {self.tq[k]:.6g})"
            raise type(exc)(msg, index=idx) from exc

    def residual_full(self, free, fields=None):
        v_hat, e_hat = self.recover(free) if fields is None else fields
        w = self.wq
        rho = self.params.rho0
        R = -rho * (self._L_t.T @ (w * v_hat)) + self._L_x.T @ (w * material.stress(e_hat))
        R += self._P_x.T @ (w * v_hat) - self._P_t.T @ (w * e_hat)
        return R + self._load

    def jacobian_full(self, free, fields=None):
        d = self.point_dual(free)
        _, e_hat = self.recover(free) if fields is None else fields
        _, _, de_dPt, _ = dtp_dynamic_derivatives(d, self.point_base(), self.params, e_hat)
        w = self.wq
        Ba = self.params.rho0 * self._L_t - self._P_x
        Bb = self._P_t - sp.diags(material.stiffness(e_hat)) @ self._L_x
        J = Ba.T @ sp.diags(w / self.params.c_v) @ Ba + Bb.T @ sp.diags(w * de_dPt) @ Bb
        return -J.tocsr()

    def residual(self, free):
        return self.residual_full(free)[self.free]

    def jacobian(self, free):
        return self.jacobian_full(free)[self.free][:, self.free]

    def zero_dofs(self):
        return np.zeros(self.n_free)


def _as_free(problem, dofs):
    if isinstance(dofs, DynamicDualDofs):
        return np.concatenate([dofs.L, dofs.P])[problem.free]
    return np.asarray(dofs, dtype=float)


def assemble_dynamic_residual(mesh, dofs, base, case, params):
    """Free-dof residual; ``dofs`` is :class:`DynamicDualDofs` or a free vector."""
    prob = DynamicDualProblem(mesh, base, case, params)
    return prob.residual(_as_free(prob, dofs))


def assemble_dynamic_jacobian(mesh, dofs, base, case, params):
    prob = DynamicDualProblem(mesh, base, case, params)
    return prob.jacobian(_as_free(prob, dofs))


def spacetime_l2_project(values, mesh: SpaceTimeMesh):
    """L2 projection of volume quadrature-point values onto the bilinear space.

    Returns an array of shape ``(nt + 1, nx + 1)``.
    """
    N, _, _, _, _, wq = mesh.point_matrices()
    values = np.asarray(values, dtype=float).ravel()
    if values.size != wq.size:
        raise ValueError("values must live on the quadrature points of the mesh")
    M = (N.T @ sp.diags(wq) @ N).tocsc()
    nodal = spla.splu(M).solve(N.T @ (wq * values))
    return nodal.reshape(mesh.nt + 1, mesh.nx + 1)
