"""Uniform rectangular meshes and the connectivity used by the DG scheme.

Cells are numbered row-major: cell ``c = iy * nx + ix``. Vertices form an
``(ny + 1) x (nx + 1)`` grid numbered the same way. Sides are stored in two
blocks: x-sides (normal along x) first, ``ny * (nx + 1)`` of them, then
y-sides, ``(ny + 1) * nx``. With periodic boundaries the sides on the domain
boundary appear twice, once per periodic image, so every cell owns a distinct
(W, E, S, N) side record in both boundary modes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

GHOST = -1
PERIODIC = "periodic"
GHOST_CONSTANT = "ghost-constant"
BOUNDARY_MODES = (PERIODIC, GHOST_CONSTANT)


class Cell(NamedTuple):
    id: int
    centroid: tuple[float, float]
    extents: tuple[float, float]
    area: float
    vertices: tuple[int, int, int, int]


class Side(NamedTuple):
    id: int
    left: int
    right: int
    normal: tuple[float, float]
    length: float


@dataclass(frozen=True)
class Mesh:
    domain: tuple[float, float, float, float]
    nx: int
    ny: int
    boundary_mode: str = PERIODIC

    @property
    def hx(self) -> float:
        return (self.domain[1] - self.domain[0]) / self.nx

    @property
    def hy(self) -> float:
        return (self.domain[3] - self.domain[2]) / self.ny

    @property
    def cell_area(self) -> float:
        return self.hx * self.hy

    @property
    def n_cells(self) -> int:
        return self.nx * self.ny

    @property
    def n_vertices(self) -> int:
        return (self.nx + 1) * (self.ny + 1)

    @property
    def n_sides(self) -> int:
        return self.ny * (self.nx + 1) + (self.ny + 1) * self.nx

    @property
    def periodic(self) -> bool:
        return self.boundary_mode == PERIODIC

    @property
    def area(self) -> float:
        x0, x1, y0, y1 = self.domain
        return (x1 - x0) * (y1 - y0)

    @cached_property
    def x_vertices(self) -> np.ndarray:
        return np.linspace(self.domain[0], self.domain[1], self.nx + 1)

    @cached_property
    def y_vertices(self) -> np.ndarray:
        return np.linspace(self.domain[2], self.domain[3], self.ny + 1)

    @cached_property
    def x_centers(self) -> np.ndarray:
        return self.domain[0] + (np.arange(self.nx) + 0.5) * self.hx

    @cached_property
    def y_centers(self) -> np.ndarray:
        return self.domain[2] + (np.arange(self.ny) + 0.5) * self.hy

    @cached_property
    def centroids(self) -> np.ndarray:
        """(n_cells, 2) array of cell centroids."""
        X, Y = np.meshgrid(self.x_centers, self.y_centers)
        return np.column_stack([X.ravel(), Y.ravel()])

    @cached_property
    def vertex_coords(self) -> np.ndarray:
        X, Y = np.meshgrid(self.x_vertices, self.y_vertices)
        return np.column_stack([X.ravel(), Y.ravel()])

    def cell_index(self, ix: int, iy: int) -> int:
        return iy * self.nx + ix

    def cell_ij(self, cell_id: int) -> tuple[int, int]:
        iy, ix = divmod(cell_id, self.nx)
        return ix, iy

    def _check_cell(self, cell_id: int) -> None:
        if not 0 <= cell_id < self.n_cells:
            raise IndexError(f"cell id {cell_id} out of range [0, {self.n_cells})")

    def cell_vertices(self, cell_id: int) -> tuple[int, int, int, int]:
        """Vertex ids of a cell ordered SW, SE, NE, NW."""
        ix, iy = self.cell_ij(cell_id)
        w = self.nx + 1
        sw = iy * w + ix
        return sw, sw + 1, sw + w + 1, sw + w

    def cell(self, cell_id: int) -> Cell:
        self._check_cell(cell_id)
        ix, iy = self.cell_ij(cell_id)
        return Cell(
            id=cell_id,
            centroid=(float(self.x_centers[ix]), float(self.y_centers[iy])),
            extents=(self.hx, self.hy),
            area=self.cell_area,
            vertices=self.cell_vertices(cell_id),
        )

    # -- sides -----------------------------------------------------------

    def _x_side_id(self, col: int, iy: int) -> int:
        return iy * (self.nx + 1) + col

    def _y_side_id(self, ix: int, row: int) -> int:
        return self.ny * (self.nx + 1) + row * self.nx + ix

    def _x_side_cells(self, col: int, iy: int) -> tuple[int, int]:
        # (cell west of the side, cell east of it), GHOST outside the domain
        west, east = col - 1, col
        if self.periodic:
            west %= self.nx
            east %= self.nx
            return self.cell_index(west, iy), self.cell_index(east, iy)
        w = self.cell_index(west, iy) if west >= 0 else GHOST
        e = self.cell_index(east, iy) if east < self.nx else GHOST
        return w, e

    def _y_side_cells(self, ix: int, row: int) -> tuple[int, int]:
        south, north = row - 1, row
        if self.periodic:
            south %= self.ny
            north %= self.ny
            return self.cell_index(ix, south), self.cell_index(ix, north)
        s = self.cell_index(ix, south) if south >= 0 else GHOST
        n = self.cell_index(ix, north) if north < self.ny else GHOST
        return s, n

    def side(self, side_id: int) -> Side:
        n_x = self.ny * (self.nx + 1)
        if not 0 <= side_id < self.n_sides:
            raise IndexError(f"side id {side_id} out of range")
        if side_id < n_x:
            iy, col = divmod(side_id, self.nx + 1)
            a, b = self._x_side_cells(col, iy)
            normal, length = (1.0, 0.0), self.hy
        else:
            row, ix = divmod(side_id - n_x, self.nx)
            a, b = self._y_side_cells(ix, row)
            normal, length = (0.0, 1.0), self.hx
        if a == GHOST:
            # orient boundary sides outward from the interior cell
            return Side(side_id, b, GHOST, (-normal[0], -normal[1]), length)
        return Side(side_id, a, b, normal, length)

    @property
    def cells(self) -> list[Cell]:
        return [self.cell(c) for c in range(self.n_cells)]

    @property
    def sides(self) -> list[Side]:
        return [self.side(s) for s in range(self.n_sides)]


def build_uniform_mesh(domain, nx: int, ny: int, boundary_mode: str = PERIODIC) -> Mesh:
    """Build a uniform ``nx x ny`` mesh of the rectangle ``(x0, x1, y0, y1)``."""
    x0, x1, y0, y1 = (float(v) for v in domain)
    if int(nx) != nx or int(ny) != ny or nx < 1 or ny < 1:
        raise ValueError(f"cell counts must be positive integers, got nx={nx}, ny={ny}")
    if not (x1 > x0 and y1 > y0):
        raise ValueError(f"degenerate domain {domain!r}")
    if boundary_mode not in BOUNDARY_MODES:
        raise ValueError(f"unknown boundary mode {boundary_mode!r}, expected one of {BOUNDARY_MODES}")
    return Mesh((x0, x1, y0, y1), int(nx), int(ny), boundary_mode)


def edge_neighbors(mesh: Mesh, cell_id: int) -> list[tuple[int, int, tuple[float, float], float]]:
    """Sides of a cell in (W, E, S, N) order.

    Each entry is ``(side_id, neighbor_id, outward_normal, length)``;
    ``neighbor_id`` is :data:`GHOST` outside a ghost-constant domain.
    """
    mesh._check_cell(cell_id)
    ix, iy = mesh.cell_ij(cell_id)
    west = mesh._x_side_cells(ix, iy)[0]
    east = mesh._x_side_cells(ix + 1, iy)[1]
    south = mesh._y_side_cells(ix, iy)[0]
    north = mesh._y_side_cells(ix, iy + 1)[1]
    return [
        (mesh._x_side_id(ix, iy), west, (-1.0, 0.0), mesh.hy),
        (mesh._x_side_id(ix + 1, iy), east, (1.0, 0.0), mesh.hy),
        (mesh._y_side_id(ix, iy), south, (0.0, -1.0), mesh.hx),
        (mesh._y_side_id(ix, iy + 1), north, (0.0, 1.0), mesh.hx),
    ]


def vertex_cells(mesh: Mesh, vertex_id: int) -> list[int]:
    """Cells sharing a vertex, sorted by id."""
    if not 0 <= vertex_id < mesh.n_vertices:
        raise IndexError(f"vertex id {vertex_id} out of range")
    iy, ix = divmod(vertex_id, mesh.nx + 1)
    found = set()
    for dy in (-1, 0):
        for dx in (-1, 0):
            cx, cy = ix + dx, iy + dy
            if mesh.periodic:
                cx %= mesh.nx
                cy %= mesh.ny
            elif not (0 <= cx < mesh.nx and 0 <= cy < mesh.ny):
                continue
            found.add(mesh.cell_index(cx, cy))
    return sorted(found)


def vertex_stencil(mesh: Mesh, cell_id: int) -> list[int]:
    """Cells sharing at least one vertex with ``cell_id`` (itself included)."""
    mesh._check_cell(cell_id)
    found = set()
    for v in mesh.cell_vertices(cell_id):
        found.update(vertex_cells(mesh, v))
    return sorted(found)


# -- array helpers used by the vectorized solver ---------------------------

def pad(mesh: Mesh, field: np.ndarray, ghost_value, width: int = 1) -> np.ndarray:
    """Pad a ``(ny, nx, ...)`` field by ``width`` layers of ghost cells.

    Periodic meshes wrap; ghost-constant meshes fill with ``ghost_value``
    (a scalar, or one value per trailing component).
    """
    spec = [(width, width), (width, width)] + [(0, 0)] * (field.ndim - 2)
    if mesh.periodic:
        return np.pad(field, spec, mode="wrap")
    out = np.empty(
        (field.shape[0] + 2 * width, field.shape[1] + 2 * width) + field.shape[2:],
        dtype=field.dtype,
    )
    out[...] = ghost_value
    out[width:-width, width:-width] = field
    return out
