"""Ranges, conservation, entropy and error measurements for DG-P1 fields."""

from __future__ import annotations

import csv

import numpy as np

from .dg import DEFAULT_RULES, QuadratureRules, trace_values
from .mesh import Mesh
from .stepper import LMP_TOL, RunState, StepDiagnostics


def global_range(solution: np.ndarray, mesh: Mesh) -> tuple[float, float]:
    """Min and max of the piecewise-linear field (attained at centroids or vertices)."""
    vals = trace_values(mesh, solution)
    return float(vals.min()), float(vals.max())


def _quadrature_values(solution, rules):
    pts = rules.volume_points
    return solution[:, 0:1] + solution[:, 1:2] * pts[:, 0] + solution[:, 2:3] * pts[:, 1]


def total_entropy(law, solution: np.ndarray, mesh: Mesh, rules: QuadratureRules = DEFAULT_RULES) -> float:
    u = _quadrature_values(solution, rules)
    return float(mesh.cell_area * (law.entropy(u) @ rules.volume_weights).sum())


def total_mass(solution: np.ndarray, mesh: Mesh) -> float:
    return float(mesh.cell_area * solution[:, 0].sum())


def entropy_residuals(state: RunState) -> np.ndarray:
    """Per-cell ``P_i + sum_j |S_ij| G_ij - nu_i D_i`` at the current solution."""
    return state.solver.evaluate(state.solution).entropy_residual


def lmp_check(state: RunState, dt: float | None = None) -> list[int]:
    """Cells whose forward Euler average leaves its local bounds.

    Applies one unlimited-by-assertion stage of size ``dt`` (default: the
    state's step) and lists offending cell ids.
    """
    solver = state.solver
    dt = state.dt if dt is None else dt
    data = solver.evaluate(state.solution)
    new_avg = state.solution[:, 0] + dt / solver.mass[0] * data.rhs[:, 0]
    bad = (new_avg < data.umin - LMP_TOL) | (new_avg > data.umax + LMP_TOL)
    return [int(c) for c in np.flatnonzero(bad)]


def l1_error(solution: np.ndarray, mesh: Mesh, exact, rules: QuadratureRules = DEFAULT_RULES) -> float:
    """Quadrature L1 norm of ``u_h - exact(x, y)``."""
    pts, w = rules.volume_points, rules.volume_weights
    X = mesh.centroids[:, 0:1] + pts[:, 0] * mesh.hx
    Y = mesh.centroids[:, 1:2] + pts[:, 1] * mesh.hy
    err = np.abs(_quadrature_values(solution, rules) - exact(X, Y))
    return float(mesh.cell_area * (err @ w).sum())


def write_history(history: list[StepDiagnostics], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(StepDiagnostics.FIELDS)
        for d in history:
            writer.writerow([d.step, repr(d.t), repr(d.min), repr(d.max), repr(d.mass),
                             repr(d.entropy), repr(d.max_entropy_residual), d.lmp_violations])
