"""Field snapshots as legacy ASCII VTK structured grids or CSV."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .dg import trace_values
from .mesh import Mesh

FMT = "%.17g"


def vertex_values(mesh: Mesh, solution: np.ndarray) -> np.ndarray:
    """Average of the adjacent cell polynomials at each vertex, shape (ny+1, nx+1)."""
    vals = trace_values(mesh, solution)[:, 1:].reshape(mesh.ny, mesh.nx, 4)
    acc = np.zeros((mesh.ny + 1, mesh.nx + 1))
    cnt = np.zeros_like(acc)
    # SW, SE, NE, NW corners
    for c, (oy, ox) in enumerate(((0, 0), (0, 1), (1, 1), (1, 0))):
        acc[oy:oy + mesh.ny, ox:ox + mesh.nx] += vals[..., c]
        cnt[oy:oy + mesh.ny, ox:ox + mesh.nx] += 1.0
    return acc / cnt


def _vtk_text(mesh: Mesh, solution: np.ndarray, title: str) -> str:
    pts = mesh.vertex_coords
    npts = len(pts)
    lines = [
        "# vtk DataFile Version 3.0",
        title[:255],
        "ASCII",
        "DATASET STRUCTURED_GRID",
        f"DIMENSIONS {mesh.nx + 1} {mesh.ny + 1} 1",
        f"POINTS {npts} double",
    ]
    lines += [f"{FMT % x} {FMT % y} 0" for x, y in pts]
    lines += [f"POINT_DATA {npts}", "SCALARS u double 1", "LOOKUP_TABLE default"]
    lines += [FMT % v for v in vertex_values(mesh, solution).ravel()]
    lines += [f"CELL_DATA {mesh.n_cells}", "SCALARS u_avg double 1", "LOOKUP_TABLE default"]
    lines += [FMT % v for v in solution[:, 0]]
    return "\n".join(lines) + "\n"


def _csv_text(mesh: Mesh, solution: np.ndarray) -> str:
    pts = mesh.vertex_coords
    u = vertex_values(mesh, solution).ravel()
    rows = ["x,y,u"] + [f"{FMT % x},{FMT % y},{FMT % v}" for (x, y), v in zip(pts, u)]
    return "\n".join(rows) + "\n"


def write_field(solution: np.ndarray, mesh: Mesh, path, fmt: str = "vtk", title: str = "esdg field") -> Path:
    path = Path(path)
    if fmt == "vtk":
        text = _vtk_text(mesh, solution, title)
    elif fmt == "csv":
        text = _csv_text(mesh, solution)
    else:
        raise ValueError(f"unknown field format {fmt!r}")
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write field file {path}: {exc}") from exc
    return path


def read_csv_field(path) -> np.ndarray:
    """Read back a CSV snapshot as an (n_vertices, 3) array of x, y, u."""
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
