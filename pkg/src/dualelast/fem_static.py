"""Dual elastostatics on [0, 1] with linear elements.

Unknowns are the nodal values of the multipliers ``lambda`` (all nodes) and
``mu`` (interior nodes; ``mu(0) = mu(1) = 0``).  Free-dof ordering is all
``lambda`` nodes followed by the interior ``mu`` nodes.

At every quadrature point the primal fields are recovered through the DtP map
and the residual is the first variation of the dual functional.  Writing

    w1 = lambda_x + mu              (lambda_x without the bulk term)
    w2 = lambda + flux'(e_hat) mu_x

the Jacobian takes the form ``-(B1^T W/c_u B1 + B2^T W/g' B2)`` with ``B1``,
``B2`` the sparse maps from dofs to ``w1``, ``w2`` at quadrature points.  It is
symmetric and negative semidefinite wherever the DtP map is well defined.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import material
from .basestate import BaseState
from .dtp import AuxPotentialParams, PointBase, StaticPointDual, dtp_static, dtp_static_derivatives
from .errors import DtPError

__all__ = [
    "gauss_legendre",
    "Mesh1D",
    "DualDofs",
    "CaseBC",
    "StaticDualProblem",
    "assemble_residual",
    "assemble_jacobian",
    "apply_dual_bcs",
    "mass_matrix",
    "l2_project",
    "l1_norm",
    "l1_error",
    "l1_difference",
    "interpolate",
]


def gauss_legendre(n):
    """Gauss-Legendre points and weights on the reference interval [0, 1]."""
    xi, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (xi + 1.0), 0.5 * w


class Mesh1D:
    """Linear-element mesh of [0, 1].

    Parameters
    ----------
    nodes : array_like
        Strictly increasing coordinates with ``nodes[0] == 0`` and
        ``nodes[-1] == 1``.
    n_quad : int
        Gauss points per element.
    """

    def __init__(self, nodes, n_quad=2):
        nodes = np.asarray(nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("need at least two nodes")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("node coordinates must be strictly increasing")
        if nodes[0] != 0.0 or nodes[-1] != 1.0:
            raise ValueError("mesh must span [0, 1] exactly")
        self.nodes = nodes
        self.n_quad = int(n_quad)
        self.h = np.diff(nodes)
        self.elements = np.column_stack([np.arange(nodes.size - 1), np.arange(1, nodes.size)])
        xi, w = gauss_legendre(self.n_quad)
        self.xi = xi
        # reference shape functions at the Gauss points, shape (nq, 2)
        self.shape = np.column_stack([1.0 - xi, xi])
        self.xq = nodes[:-1, None] + self.h[:, None] * xi[None, :]
        self.wq = self.h[:, None] * w[None, :]

    @classmethod
    def uniform(cls, n_elements, n_quad=2):
        return cls(np.linspace(0.0, 1.0, int(n_elements) + 1), n_quad=n_quad)

    @property
    def n_elements(self):
        return self.h.size

    @property
    def n_nodes(self):
        return self.nodes.size

    def point_matrices(self):
        """Sparse maps from nodal values to values and x-derivatives at quadrature points.

        Returns ``(N, Nx)`` of shape ``(n_elements * n_quad, n_nodes)``; rows
        are ordered element-major, matching ``self.xq.ravel()``.
        """
        ne, nq = self.n_elements, self.n_quad
        rows = np.repeat(np.arange(ne * nq), 2)
        cols = np.repeat(self.elements, nq, axis=0).ravel()
        vals = np.tile(self.shape, (ne, 1)).ravel()
        dvals = (np.array([-1.0, 1.0])[None, None, :] / self.h[:, None, None]).repeat(nq, axis=1).ravel()
        shape = (ne * nq, self.n_nodes)
        N = sp.csr_matrix((vals, (rows, cols)), shape=shape)
        Nx = sp.csr_matrix((dvals, (rows, cols)), shape=shape)
        return N, Nx


@dataclass
class CaseBC:
    """Load and boundary data: bulk slope ``alpha`` and right-end displacement ``alpha_star``."""

    alpha: float = 1.0
    alpha_star: float = 1.0
    include_bulk_term: bool = True


@dataclass
class DualDofs:
    """Nodal multipliers; ``mu`` carries the (zero) boundary values too."""

    lam: np.ndarray
    mu: np.ndarray

    @classmethod
    def zeros(cls, mesh: Mesh1D):
        return cls(np.zeros(mesh.n_nodes), np.zeros(mesh.n_nodes))

    @classmethod
    def from_free(cls, free, mesh: Mesh1D):
        free = np.asarray(free, dtype=float)
        n = mesh.n_nodes
        if free.size != 2 * n - 2:
            raise ValueError(f"expected {2 * n - 2} free dofs, got {free.size}")
        mu = np.zeros(n)
        mu[1:-1] = free[n:]
        return cls(free[:n].copy(), mu)

    def to_free(self):
        return np.concatenate([self.lam, self.mu[1:-1]])


def _free_index(n_nodes):
    """Indices of the free dofs inside the full ``[lambda, mu]`` vector."""
    return np.concatenate([np.arange(n_nodes), n_nodes + np.arange(1, n_nodes - 1)])


def apply_dual_bcs(residual, jacobian, mesh: Mesh1D, bc: CaseBC):
    """Reduce a full ``[lambda, mu]`` system to the free dofs.

    Drops the ``mu`` rows/columns at ``x = 0`` and ``x = 1`` (homogeneous
    Dirichlet) and adds the Neumann datum ``alpha_star`` to the residual row of
    ``lambda`` at ``x = 1``.  Either argument may be ``None``.
    """
    free = _free_index(mesh.n_nodes)
    R = None
    J = None
    if residual is not None:
        R = np.asarray(residual, dtype=float)[free].copy()
        R[mesh.n_nodes - 1] += bc.alpha_star
    if jacobian is not None:
        J = sp.csr_matrix(jacobian)[free][:, free]
    return R, J


class StaticDualProblem:
    """Residual/Jacobian evaluator for one mesh, base state and load case.

    Base-state values at quadrature points are cached at construction.
    Methods accept the free-dof vector.
    """

    def __init__(self, mesh: Mesh1D, base: BaseState, bc: CaseBC, params: AuxPotentialParams):
        self.mesh = mesh
        self.base = base
        self.bc = bc
        self.params = params
        xq = mesh.xq.ravel()
        self.xq = xq
        self.wq = mesh.wq.ravel()
        self.u_bar = np.asarray(base.u_bar(xq), dtype=float) * np.ones_like(xq)
        self.e_bar = np.asarray(base.e_bar(xq), dtype=float) * np.ones_like(xq)
        N, Nx = mesh.point_matrices()
        n = mesh.n_nodes
        zero = sp.csr_matrix(N.shape)
        # maps from the full [lambda, mu] vector to point values
        self._lam = sp.hstack([N, zero]).tocsr()
        self._lam_x = sp.hstack([Nx, zero]).tocsr()
        self._mu = sp.hstack([zero, N]).tocsr()
        self._mu_x = sp.hstack([zero, Nx]).tocsr()
        self.n_full = 2 * n
        self.n_free = 2 * n - 2

    def full_vector(self, free):
        d = DualDofs.from_free(free, self.mesh)
        return np.concatenate([d.lam, d.mu])

    def point_dual(self, free):
        full = self.full_vector(free)
        return StaticPointDual(
            lam=self._lam @ full, lam_x=self._lam_x @ full, mu=self._mu @ full, mu_x=self._mu_x @ full
        )

    def point_base(self):
        return PointBase(u_bar=self.u_bar, e_bar=self.e_bar)

    def recover(self, free):
        """DtP fields ``(u_hat, e_hat)`` at the quadrature points (flattened)."""
        d = self.point_dual(free)
        try:
            return dtp_static(d, self.point_base(), self.params, bulk=self.bc.include_bulk_term)
        except DtPError as exc:
            raise self._locate(exc) from exc

    def _locate(self, exc):
        idx = exc.index
        if idx is None or len(idx) == 0:
            return exc
        k = int(idx[0])
        elem, q = divmod(k, self.mesh.n_quad)
        msg = f"{exc} (first at element {elem}, quadrature point {q}, x = {self.xq[k]:.6g})"
        return type(exc)(msg, index=idx)

    def residual_full(self, free, fields=None):
        u_hat, e_hat = self.recover(free) if fields is None else fields
        w = self.wq
        R = -(self._lam_x.T @ (w * u_hat) + self._lam.T @ (w * e_hat))
        R -= self._mu_x.T @ (w * material.flux(e_hat))
        if self.bc.include_bulk_term:
            R -= self._mu.T @ (w * (u_hat - self.bc.alpha * self.xq))
        return R

    def jacobian_full(self, free, fields=None):
        d = self.point_dual(free)
        _, e_hat = self.recover(free) if fields is None else fields
        du, _, de_dlam, _ = dtp_static_derivatives(
            d, self.point_base(), self.params, e_hat, bulk=self.bc.include_bulk_term
        )
        w = self.wq
        B1 = self._lam_x + self._mu if self.bc.include_bulk_term else self._lam_x
        B2 = self._lam + sp.diags(material.flux_derivative(e_hat)) @ self._mu_x
        J = B1.T @ sp.diags(w * du) @ B1 + B2.T @ sp.diags(w * de_dlam) @ B2
        return -J.tocsr()

    def residual(self, free):
        R, _ = apply_dual_bcs(self.residual_full(free), None, self.mesh, self.bc)
        return R

    def jacobian(self, free):
        _, J = apply_dual_bcs(None, self.jacobian_full(free), self.mesh, self.bc)
        return J

    def zero_dofs(self):
        return np.zeros(self.n_free)


def assemble_residual(mesh, dofs, base, bc, params):
    """Free-dof residual; ``dofs`` is a :class:`DualDofs` or a free vector."""
    prob = StaticDualProblem(mesh, base, bc, params)
    free = dofs.to_free() if isinstance(dofs, DualDofs) else np.asarray(dofs, dtype=float)
    return prob.residual(free)


def assemble_jacobian(mesh, dofs, base, bc, params):
    """Free-dof Jacobian (sparse CSR)."""
    prob = StaticDualProblem(mesh, base, bc, params)
    free = dofs.to_free() if isinstance(dofs, DualDofs) else np.asarray(dofs, dtype=float)
    return prob.jacobian(free)


# ---------------------------------------------------------------------------
# post-processing
# ---------------------------------------------------------------------------


def mass_matrix(mesh: Mesh1D):
    """Consistent mass matrix of the linear-element space."""
    N, _ = mesh.point_matrices()
    return (N.T @ sp.diags(mesh.wq.ravel()) @ N).tocsc()


def l2_project(values, mesh: Mesh1D):
    """L2 projection of quadrature-point values onto continuous linear elements.

    ``values`` has shape ``(n_elements, n_quad)`` or the flattened equivalent.
    """
    values = np.asarray(values, dtype=float).ravel()
    if values.size != mesh.n_elements * mesh.n_quad:
        raise ValueError("values must live on the quadrature points of the mesh")
    N, _ = mesh.point_matrices()
    rhs = N.T @ (mesh.wq.ravel() * values)
    M = mass_matrix(mesh)
    try:
        lu = spla.splu(M)
    except RuntimeError as exc:
        raise np.linalg.LinAlgError("singular mass matrix") from exc
    return lu.solve(rhs)


def interpolate(nodal, mesh: Mesh1D, x):
    """Evaluate a nodal linear-element field at arbitrary points."""
    return np.interp(x, mesh.nodes, nodal)


def _l1_piecewise_linear(a, b, h):
    same = a * b >= 0
    absum = np.abs(a) + np.abs(b)
    with np.errstate(divide="ignore", invalid="ignore"):
        crossing = np.where(absum > 0, (a * a + b * b) / (2.0 * absum), 0.0)
    return np.sum(h * np.where(same, 0.5 * absum, crossing))


def l1_norm(field, mesh: Mesh1D):
    """``int_0^1 |f| dx`` for a nodal field (exact) or a quadrature-point field."""
    field = np.asarray(field, dtype=float)
    if field.shape == (mesh.n_nodes,):
        return float(_l1_piecewise_linear(field[:-1], field[1:], mesh.h))
    if field.size == mesh.n_elements * mesh.n_quad:
        return float(np.sum(mesh.wq.ravel() * np.abs(field.ravel())))
    raise ValueError("field must be nodal or live on the quadrature points")


def _composite_points(mesh, n_points):
    xi, w = gauss_legendre(n_points)
    x = mesh.nodes[:-1, None] + mesh.h[:, None] * xi[None, :]
    return x.ravel(), (mesh.h[:, None] * w[None, :]).ravel()


def l1_error(nodal, target, mesh: Mesh1D, n_points=8):
    """``|| f_h - target ||_1`` by composite Gauss quadrature on ``mesh``."""
    x, w = _composite_points(mesh, n_points)
    return float(np.sum(w * np.abs(interpolate(nodal, mesh, x) - target(x))))


def l1_difference(nodal_a, mesh_a: Mesh1D, nodal_b, mesh_b: Mesh1D, n_points=4):
    """L1 distance of two nodal fields, integrated on the finer of the two meshes."""
    fine = mesh_a if mesh_a.n_elements >= mesh_b.n_elements else mesh_b
    # merge node sets so both interpolants are linear on every sub-interval
    nodes = np.union1d(mesh_a.nodes, mesh_b.nodes)
    merged = Mesh1D(nodes, n_quad=fine.n_quad)
    x, w = _composite_points(merged, n_points)
    diff = interpolate(nodal_a, mesh_a, x) - interpolate(nodal_b, mesh_b, x)
    return float(np.sum(w * np.abs(diff)))
