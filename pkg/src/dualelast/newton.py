"""Plain Newton-Raphson with max-norm convergence on the free-dof residual."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import Diverged, DtPError, DtPFailure, MaxIterations, SingularJacobian

__all__ = ["NewtonConfig", "NewtonReport", "linear_solve", "newton_solve"]

log = logging.getLogger(__name__)

_REFINEMENT_SWEEPS = 3


@dataclass(frozen=True)
class NewtonConfig:
    tol: float = 1e-10
    max_iter: int = 50
    divergence_threshold: float = 1e8
    damping: float = 1.0

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if int(self.max_iter) < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.divergence_threshold > 0:
            raise ValueError("divergence_threshold must be > 0")
        if not 0 < self.damping <= 1:
            raise ValueError("damping must lie in (0, 1]")


@dataclass
class NewtonReport:
    iterations: int = 0
    history: list = field(default_factory=list)
    converged: bool = False
    failure: str | None = None

    @property
    def final_residual(self):
        return self.history[-1] if self.history else np.nan


def _inf_norm(A):
    if sp.issparse(A):
        return float(abs(A).sum(axis=1).max()) if A.shape[0] else 0.0
    return float(np.max(np.sum(np.abs(A), axis=1))) if A.size else 0.0


def linear_solve(matrix, rhs, rtol=1e-10):
    """Solve ``matrix @ x = rhs`` (dense or sparse) and check the result.

    The acceptance test is the normwise backward error
    ``|b - A x| / (|A| |x| + |b|)`` in the infinity norm.

    Raises
    ------
    SingularJacobian
        If factorisation fails or the backward error exceeds ``rtol``.
    """
    rhs = np.asarray(rhs, dtype=float)
    try:
        if sp.issparse(matrix):
            A = sp.csc_matrix(matrix)
            solve = spla.splu(A).solve
        else:
            A = np.asarray(matrix, dtype=float)
            with warnings.catch_warnings():
                warnings.simplefilter("error", sla.LinAlgWarning)
                factors = sla.lu_factor(A, check_finite=True)
            solve = lambda b: sla.lu_solve(factors, b)  # noqa: E731
        x = solve(rhs)
    except (RuntimeError, ValueError, np.linalg.LinAlgError, sla.LinAlgError, sla.LinAlgWarning) as exc:
        raise SingularJacobian(f"linear solve failed: {exc}") from exc
    norm_A = _inf_norm(A)

    def backward_error(x):
        r = rhs - A @ x
        denom = norm_A * np.max(np.abs(x), initial=0.0) + np.max(np.abs(rhs), initial=0.0)
        return r, (np.max(np.abs(r), initial=0.0) / denom if denom > 0 else 0.0)

    # iterative refinement recovers digits lost to conditioning on fine meshes
    for _ in range(_REFINEMENT_SWEEPS + 1):
        if not np.all(np.isfinite(x)):
            raise SingularJacobian("linear solve produced non-finite values")
        r, err = backward_error(x)
        if err <= rtol:
            return x
        x = x + solve(r)
    _, err = backward_error(x)
    if not err <= rtol:
        raise SingularJacobian(f"ill-conditioned system: backward error {err:.3e}")
    return x


def newton_solve(residual_fn, jacobian_fn, initial, config: NewtonConfig | None = None):
    """Drive ``residual_fn`` to zero from ``initial``.

    ``|R|`` is the max over free dofs of ``|R_i|``.  Convergence is checked on
    the residual evaluated at the updated iterate, so a converged return
    always satisfies ``|R| < tol``.

    Returns
    -------
    (dofs, NewtonReport)

    Raises
    ------
    SingularJacobian, Diverged, MaxIterations, DtPFailure
        Each carries the partial report as ``.report``.
    """
    config = config or NewtonConfig()
    report = NewtonReport()
    x = np.array(initial, dtype=float, copy=True)

    def evaluate(x):
        try:
            return residual_fn(x)
        except DtPError as exc:
            report.failure = f"DtP failure: {exc}"
            raise DtPFailure(report.failure, report) from exc

    R = evaluate(x)
    d = float(np.max(np.abs(R))) if R.size else 0.0
    report.history.append(d)
    if d < config.tol:
        report.converged = True
        return x, report

    for k in range(1, int(config.max_iter) + 1):
        try:
            J = jacobian_fn(x)
        except DtPError as exc:
            report.failure = f"DtP failure: {exc}"
            raise DtPFailure(report.failure, report) from exc
        try:
            dx = linear_solve(J, -R)
        except SingularJacobian as exc:
            report.failure = str(exc)
            exc.report = report
            raise
        x = x + config.damping * dx
        R = evaluate(x)
        d = float(np.max(np.abs(R)))
        report.iterations = k
        report.history.append(d)
        log.debug("newton iter %d |R| = %.3e", k, d)
        if not np.isfinite(d) or d > config.divergence_threshold:
            report.failure = f"diverged: |R| = {d:.3e} at iteration {k}"
            raise Diverged(report.failure, report)
        if d < config.tol:
            report.converged = True
            return x, report

    report.failure = f"no convergence in {config.max_iter} iterations (|R| = {d:.3e})"
    raise MaxIterations(report.failure, report)
