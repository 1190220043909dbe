"""Taylor-basis DG-P1 building blocks on uniform rectangles.

A solution is a float array of shape ``(n_cells, 3)`` holding, per cell, the
cell average ``u0`` and the scaled slopes ``u1 = hx du/dx``, ``u2 = hy du/dy``.
On a cell with centroid ``(xc, yc)`` the polynomial is

    u(x, y) = u0 + u1 (x - xc) / hx + u2 (y - yc) / hy.

Side and volume integrals are done in reference coordinates
``xi = (x - xc) / hx`` in [-1/2, 1/2] with rules whose weights sum to one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mesh import GHOST, Mesh, edge_neighbors, pad
from .problems import ConservationLaw, max_wave_speed


@dataclass(frozen=True)
class QuadratureRules:
    edge_points: np.ndarray
    edge_weights: np.ndarray
    volume_points: np.ndarray
    volume_weights: np.ndarray
    # 1D factor of the tensor volume rule; volume point (i, j) is index i * q + j
    line_points: np.ndarray = None
    line_weights: np.ndarray = None

    def edge_rule(self, length: float) -> tuple[np.ndarray, np.ndarray]:
        """Reference points and physical weights (summing to ``length``)."""
        return self.edge_points, self.edge_weights * length

    def volume_rule(self, area: float) -> tuple[np.ndarray, np.ndarray]:
        return self.volume_points, self.volume_weights * area


def _symmetric_gauss(n: int):
    # exact mirror symmetry so odd moments of even data vanish identically
    s, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (s - s[::-1]), 0.5 * (w + w[::-1])


def gauss_rules(edge_points: int = 3, volume_points: int = 3) -> QuadratureRules:
    """Gauss-Legendre rule per side and its tensor product per cell."""
    if edge_points < 1 or volume_points < 1:
        raise ValueError("quadrature needs at least one point per direction")
    s, w = _symmetric_gauss(edge_points)
    sv, wv = _symmetric_gauss(volume_points)
    xi, eta = np.meshgrid(sv / 2.0, sv / 2.0, indexing="ij")
    wvol = np.outer(wv / 2.0, wv / 2.0)
    return QuadratureRules(
        edge_points=s / 2.0,
        edge_weights=w / 2.0,
        volume_points=np.column_stack([xi.ravel(), eta.ravel()]),
        volume_weights=wvol.ravel(),
        line_points=sv / 2.0,
        line_weights=wv / 2.0,
    )


DEFAULT_RULES = gauss_rules()


def basis_eval(mesh: Mesh, cell_id: int, k: int, x) -> np.ndarray:
    """Evaluate the Taylor basis function ``phi_ik`` at points ``x`` (..., 2)."""
    x = np.asarray(x, dtype=float)
    if k == 0:
        return np.ones(x.shape[:-1])
    cell = mesh.cell(cell_id)
    d = k - 1
    return (x[..., d] - cell.centroid[d]) / cell.extents[d]


def mass_diagonal(hx: float, hy: float) -> tuple[float, float, float]:
    area = hx * hy
    return area, area / 12.0, area / 12.0


def llf_flux(law: ConservationLaw, uL, uR, n, lam):
    """Local Lax-Friedrichs flux ``(f(uL) + f(uR)) . n / 2 - lam (uR - uL) / 2``."""
    uL = np.asarray(uL, dtype=float)
    uR = np.asarray(uR, dtype=float)
    fn_L = law.fx(uL) * n[0] + law.fy(uL) * n[1]
    fn_R = law.fx(uR) * n[0] + law.fy(uR) * n[1]
    return 0.5 * (fn_L + fn_R) - 0.5 * lam * (uR - uL)


def bar_state(law: ConservationLaw, ui, uj, n, lam):
    """LLF intermediate state; returns the arithmetic mean where ``lam == 0``."""
    ui = np.asarray(ui, dtype=float)
    uj = np.asarray(uj, dtype=float)
    lam = np.asarray(lam, dtype=float)
    dfn = (law.fx(uj) - law.fx(ui)) * n[0] + (law.fy(uj) - law.fy(ui)) * n[1]
    safe = np.where(lam > 0.0, lam, 1.0)
    return 0.5 * (ui + uj) - np.where(lam > 0.0, dfn / (2.0 * safe), 0.0)


def evaluate_at(solution: np.ndarray, mesh: Mesh, cell_id: int, x) -> np.ndarray:
    ix, iy = mesh.cell_ij(cell_id)
    x = np.asarray(x, dtype=float)
    u0, u1, u2 = solution[cell_id]
    return (
        u0
        + u1 * (x[..., 0] - mesh.x_centers[ix]) / mesh.hx
        + u2 * (x[..., 1] - mesh.y_centers[iy]) / mesh.hy
    )


@dataclass(frozen=True)
class SideFluxes:
    """Flux moments seen by cell ``i`` through one of its sides."""

    F_L: np.ndarray
    F_H: np.ndarray
    lam: float
    bar_ij: float
    bar_ji: float


def _side_states(law, mesh, solution, cell_id, neighbor):
    u_i = solution[cell_id]
    if neighbor == GHOST:
        return u_i, np.array([law.background, 0.0, 0.0]), None
    return u_i, solution[neighbor], neighbor


def side_fluxes(
    law: ConservationLaw,
    mesh: Mesh,
    solution: np.ndarray,
    cell_id: int,
    direction: int,
    rules: QuadratureRules = DEFAULT_RULES,
) -> SideFluxes:
    """Low/high-order flux moments on one side of ``cell_id``.

    ``direction`` indexes the (W, E, S, N) sides of the cell. This is the
    literal per-side path; the solver uses the vectorized :func:`face_fluxes`.
    """
    side_id, neighbor, normal, length = edge_neighbors(mesh, cell_id)[direction]
    u_i, u_j, nb = _side_states(law, mesh, solution, cell_id, neighbor)
    if not (np.all(np.isfinite(u_i)) and np.all(np.isfinite(u_j))):
        raise FloatingPointError(f"non-finite state at side {side_id}")
    ci = np.asarray(mesh.cell(cell_id).centroid)
    h = np.array([mesh.hx, mesh.hy])
    axis = 0 if normal[0] != 0.0 else 1
    # quadrature points along the side in physical coordinates
    s, w = rules.edge_rule(length)
    mid = ci.copy()
    mid[axis] += 0.5 * normal[axis] * h[axis]
    pts = np.repeat(mid[None, :], len(s), axis=0)
    pts[:, 1 - axis] += s * h[1 - axis]
    # neighbor centroid = own centroid shifted across the side (periodic images too)
    cj = ci + np.asarray(normal) * h

    def trace(dofs, c):
        return dofs[0] + dofs[1] * (pts[:, 0] - c[0]) / h[0] + dofs[2] * (pts[:, 1] - c[1]) / h[1]

    phi = np.stack([np.ones(len(s)), (pts[:, 0] - ci[0]) / h[0], (pts[:, 1] - ci[1]) / h[1]])
    lam = float(max_wave_speed(law, u_i[0], u_j[0], normal))
    H_low = llf_flux(law, u_i[0], u_j[0], normal, lam)
    H_high = llf_flux(law, trace(u_i, ci), trace(u_j, cj), normal, lam)
    F_L = phi @ (w * H_low) / length
    F_H = phi @ (w * H_high) / length
    bar = float(bar_state(law, u_i[0], u_j[0], normal, lam))
    return SideFluxes(F_L=F_L, F_H=F_H, lam=lam, bar_ij=bar, bar_ji=bar)


def volume_flux_integral(
    law: ConservationLaw,
    mesh: Mesh,
    solution: np.ndarray,
    cell_id: int,
    k: int,
    rules: QuadratureRules = DEFAULT_RULES,
) -> float:
    """``int_K grad(phi_ik) . f(u_ih) dx`` by the cell rule."""
    if k == 0:
        return 0.0
    pts, w = rules.volume_rule(mesh.cell_area)
    u0, u1, u2 = solution[cell_id]
    u = u0 + u1 * pts[:, 0] + u2 * pts[:, 1]
    h = mesh.hx if k == 1 else mesh.hy
    return float(w @ law.flux_component(u, k - 1)) / h


# -- vectorized kernels ------------------------------------------------------

@dataclass
class FaceBlock:
    """All sides of one orientation, between 'minus' and 'plus' cells.

    The normal points from minus to plus (+x for ``axis=0``, +y for ``axis=1``).
    Array shapes are ``(ny, nx + 1)`` for x-sides and ``(ny + 1, nx)`` for
    y-sides. ``avg_*`` is the side mean of the LLF flux and ``tr_high`` its
    first moment in the transverse coordinate.
    """

    axis: int
    u_minus: np.ndarray
    u_plus: np.ndarray
    lam: np.ndarray
    avg_low: np.ndarray
    avg_high: np.ndarray
    tr_high: np.ndarray
    bar: np.ndarray

    @property
    def normal(self) -> tuple[float, float]:
        return (1.0, 0.0) if self.axis == 0 else (0.0, 1.0)


def padded_solution(mesh: Mesh, law: ConservationLaw, U: np.ndarray) -> np.ndarray:
    grid = U.reshape(mesh.ny, mesh.nx, 3)
    return pad(mesh, grid, np.array([law.background, 0.0, 0.0]))


def face_fluxes(law, Up: np.ndarray, rules: QuadratureRules, axis: int, high: bool = True) -> FaceBlock:
    """Side flux data for every side of one orientation from a padded solution."""
    if axis == 0:
        minus, plus = Up[1:-1, :-1], Up[1:-1, 1:]
        normal_k, trans_k = 1, 2
        n = (1.0, 0.0)
    else:
        minus, plus = Up[:-1, 1:-1], Up[1:, 1:-1]
        normal_k, trans_k = 2, 1
        n = (0.0, 1.0)
    fa = law.fx if axis == 0 else law.fy
    um, up_ = minus[..., 0], plus[..., 0]
    lam = max_wave_speed(law, um, up_, n)
    f_m, f_p = fa(um), fa(up_)
    avg_low = 0.5 * (f_m + f_p) - 0.5 * lam * (up_ - um)
    safe = np.where(lam > 0.0, lam, 1.0)
    bar = 0.5 * (um + up_) - np.where(lam > 0.0, (f_p - f_m) / (2.0 * safe), 0.0)
    if high:
        s = rules.edge_points
        w = rules.edge_weights
        tr_m = (um + 0.5 * minus[..., normal_k])[..., None] + minus[..., trans_k][..., None] * s
        tr_p = (up_ - 0.5 * plus[..., normal_k])[..., None] + plus[..., trans_k][..., None] * s
        H = 0.5 * (fa(tr_m) + fa(tr_p)) - 0.5 * lam[..., None] * (tr_p - tr_m)
        avg_high = H @ w
        tr_high = H @ (w * s)
    else:
        avg_high = avg_low
        tr_high = np.zeros_like(avg_low)
    return FaceBlock(axis, um, up_, lam, avg_low, avg_high, tr_high, bar)


def volume_integrals(law, mesh: Mesh, grid: np.ndarray, rules: QuadratureRules):
    """Volume terms for the two slope equations, each of shape ``(ny, nx)``."""
    pts, w = rules.volume_points, rules.volume_weights
    u = grid[..., 0:1] + grid[..., 1:2] * pts[:, 0] + grid[..., 2:3] * pts[:, 1]
    area = mesh.cell_area
    vx = law.fx(u) @ w * (area / mesh.hx)
    vy = law.fy(u) @ w * (area / mesh.hy)
    return vx, vy


def project_initial_condition(
    law: ConservationLaw, mesh: Mesh, rules: QuadratureRules = DEFAULT_RULES, func=None
) -> np.ndarray:
    """L2 projection onto the orthogonal Taylor basis by the cell rule."""
    func = law.initial_condition if func is None else func
    pts, w = rules.volume_points, rules.volume_weights
    X = mesh.x_centers[None, :, None] + pts[:, 0] * mesh.hx
    Y = mesh.y_centers[:, None, None] + pts[:, 1] * mesh.hy
    vals = func(np.broadcast_to(X, (mesh.ny, mesh.nx, len(w))), np.broadcast_to(Y, (mesh.ny, mesh.nx, len(w))))
    vals = np.asarray(vals, dtype=float)
    q = len(rules.line_weights)
    V = vals.reshape(mesh.ny, mesh.nx, q, q)
    lw, ls = rules.line_weights, rules.line_points
    half = q // 2
    # pair mirrored points so a constant gives exactly zero slope
    odd = (lw * ls)[q - half:]

    def first_moment(g):
        return (g[..., q - half:] - g[..., :half][..., ::-1]) @ odd

    out = np.empty((mesh.ny, mesh.nx, 3))
    out[..., 0] = vals @ w
    out[..., 1] = 12.0 * first_moment(V @ lw)
    out[..., 2] = 12.0 * first_moment(np.swapaxes(V, -1, -2) @ lw)
    return out.reshape(-1, 3)


def trace_values(mesh: Mesh, U: np.ndarray) -> np.ndarray:
    """Values of each cell polynomial at its centroid and 4 vertices, shape (n_cells, 5)."""
    u0, u1, u2 = U[:, 0], U[:, 1], U[:, 2]
    out = [u0]
    for sx, sy in ((-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)):
        out.append(u0 + sx * u1 + sy * u2)
    return np.column_stack(out)
