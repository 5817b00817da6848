"""Deterministic CSV and metadata writers.

Every CSV has a one-line header and prints floats with 17 significant
digits, so values round-trip exactly.  Nothing time-dependent (wall clock,
host) is written, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import dataclasses
import re
from pathlib import Path

import numpy as np

__all__ = [
    "format_value",
    "write_csv",
    "write_static_fields",
    "write_dynamic_fields",
    "write_primal_series",
    "write_stability_series",
    "write_newton_histories",
    "refinement_rows",
    "write_refinement_table",
    "format_refinement_table",
    "write_metadata",
    "file_stem",
    "write_bound_report",
    "write_convexity_report",
]


def format_value(v):
    """17 significant digits for floats, plain text otherwise."""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(path, header, rows):
    """Write ``rows`` (iterables of values) under ``header``; returns the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")
    return path


def file_stem(label):
    """Filesystem-safe stem for a case label such as ``hat_bifurcation(a=0.2)``."""
    return re.sub(r"_+", "_", re.sub(r"[^A-Za-z0-9.]+", "_", label)).strip("_")


def _or_nan(arr, n):
    return np.full(n, np.nan) if arr is None else np.asarray(arr, dtype=float)


def write_static_fields(report, path):
    """Columns ``x, u_hat, e_hat, u_target, e_target`` at the mesh nodes."""
    x = report.x
    n = x.size
    cols = (x, report.u_hat, report.e_hat, _or_nan(report.u_target, n), _or_nan(report.e_target, n))
    return write_csv(path, ("x", "u_hat", "e_hat", "u_target", "e_target"), zip(*cols))


def write_dynamic_fields(report, path):
    """Columns ``t, x, u_hat, e_hat, u_target, e_target, v_hat`` on the space-time grid (time-major)."""
    T, X = np.meshgrid(report.t, report.x, indexing="ij")
    shape = X.shape
    ut = np.full(shape, np.nan) if report.u_target is None else report.u_target
    et = np.full(shape, np.nan) if report.e_target is None else report.e_target
    cols = [a.ravel() for a in (T, X, report.u_hat, report.e_hat, ut, et, report.v_hat)]
    return write_csv(path, ("t", "x", "u_hat", "e_hat", "u_target", "e_target", "v_hat"), zip(*cols))


def write_primal_series(history, path, max_snapshots=101):
    """Primal time series at element midpoints: ``t, x, u, v, e``.

    ``u`` and ``v`` are averages of the two element nodes; ``e`` is the
    element strain.  At most ``max_snapshots`` evenly spaced saved states are
    written, always including the first and the last.
    """
    nodes = history.mesh.nodes
    xm = 0.5 * (nodes[1:] + nodes[:-1])
    n = len(history.states)
    keep = np.unique(np.round(np.linspace(0, n - 1, min(n, max_snapshots))).astype(int)) if n else []

    def rows():
        for i in keep:
            state, e = history.states[i], history.strain[i]
            um = 0.5 * (state.u[1:] + state.u[:-1])
            vm = 0.5 * (state.v[1:] + state.v[:-1])
            for k in range(xm.size):
                yield (state.t, xm[k], um[k], vm[k], e[k])

    return write_csv(path, ("t", "x", "u", "v", "e"), rows())


def write_stability_series(report, equilibrium_strain, path):
    """Per-time maximum strain deviation for the dual (nodal ``e_hat``) and the primal.

    Columns ``source, t, max_deviation``; the dual deviation is taken from
    ``equilibrium_strain(x)``, the primal one from its initial strain.
    """
    rows = []
    if equilibrium_strain is not None:
        dev = np.max(np.abs(report.e_hat - equilibrium_strain(report.x)[None, :]), axis=1)
        rows += [("dual", t, d) for t, d in zip(report.t, dev)]
    if report.primal is not None:
        e0 = report.primal.strain[0]
        rows += [("primal", t, float(np.max(np.abs(e - e0)))) for t, e in zip(report.primal.times, report.primal.strain)]
    return write_csv(path, ("source", "t", "max_deviation"), rows)


def write_newton_histories(items, path):
    """``items`` are ``(label, mesh_size, NewtonReport)``; one row per iteration."""
    rows = []
    for label, size, rep in items:
        for k, r in enumerate(rep.history):
            rows.append((label, size, k, r))
    return write_csv(path, ("case", "mesh", "iteration", "residual"), rows)


_PARAM_FIELDS = ("c_u", "c_e", "c_v", "rho0")


def refinement_rows(reports):
    """Header and rows of a refinement table; every row carries mesh size and parameters."""
    keys = sorted({k for r in reports for k in r.errors})
    header = ["case", "n_elements", *_PARAM_FIELDS, "iterations", "final_residual", *keys]
    rows = []
    for r in reports:
        p = dataclasses.asdict(r.params)
        rows.append(
            [r.case, r.n_elements, *(float(p[f]) for f in _PARAM_FIELDS), r.newton.iterations, r.newton.final_residual]
            + [r.errors.get(k, np.nan) for k in keys]
        )
    return header, rows


def write_refinement_table(reports, path):
    header, rows = refinement_rows(reports)
    return write_csv(path, header, rows)


_TABLE_COLUMNS = (("u_l1", "||u - u_t||_1"), ("e_l1", "||e - e_t||_1"), ("u_self", "||u - u_ref||_1"),
                  ("e_self", "||e - e_ref||_1"), ("e_l1_points", "||e - e_t||_1 (qp)"),
                  ("stress_spread", "stress spread"), ("e_dev_l1", "||e - 1||_1"))


def format_refinement_table(reports):
    """Human-readable error table, one row per mesh."""
    present = [(k, t) for k, t in _TABLE_COLUMNS if any(k in r.errors for r in reports)]
    if {"u_l1", "e_l1"} <= {k for k, _ in present}:
        present = [(k, t) for k, t in present if k in ("u_l1", "e_l1")]
    elif {"u_self", "e_self"} <= {k for k, _ in present}:
        present = [(k, t) for k, t in present if k in ("u_self", "e_self")]
    head = f"{'elements':>9} | " + " | ".join(f"{t:>18}" for _, t in present)
    lines = [head, "-" * len(head)]
    for r in reports:
        lines.append(f"{r.n_elements:>9} | " + " | ".join(f"{r.errors.get(k, np.nan):>18.3e}" for k, _ in present))
    return "\n".join(lines)


def write_metadata(path, sections):
    """Write ``{section: {key: value}}`` as a plain ``key = value`` text block."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for name, entries in sections.items():
        lines.append(f"[{name}]")
        for k, v in entries.items():
            if isinstance(v, (list, tuple)):
                v = ", ".join(format_value(x) for x in v)
            lines.append(f"{k} = {format_value(v)}")
        lines.append("")
    path.write_text("\n".join(lines), encoding="utf-8")
    return path


_BOUND_COLUMNS = ("model", "index", "point", "regime", "g", "lower", "upper", "witness", "witness_bound",
                  "margin_lower", "margin_upper", "violation")


def write_bound_report(rows, path):
    """Bound-check CSV; the ``point_hash`` column identifies the sampled dual point."""
    header = [("point_hash" if c == "point" else c) for c in _BOUND_COLUMNS]
    return write_csv(path, header, ([r[c] for c in _BOUND_COLUMNS] for r in rows))


def write_convexity_report(rows, path):
    cols = ("model", "index", "t", "lhs", "rhs", "violation")
    return write_csv(path, cols, ([r[c] for c in cols] for r in rows))
