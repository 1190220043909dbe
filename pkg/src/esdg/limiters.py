"""Flux correction factors and the vertex-based slope limiter.

All functions are vectorized: the fields of :class:`LimiterInputs` may be
scalars or equally shaped arrays, one entry per side.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .mesh import Mesh, pad

_SCHEME_RE = re.compile(r"^(dg0|dg1|es[123])(f?)(s?)$")


@dataclass(frozen=True)
class Scheme:
    order: int
    entropy: Optional[int] = None
    flux_limit: bool = False
    slope_limit: bool = False

    @property
    def name(self) -> str:
        base = f"es{self.entropy}" if self.entropy else f"dg{self.order}"
        return base + ("f" if self.flux_limit else "") + ("s" if self.slope_limit else "")

    @property
    def entropy_fix(self) -> bool:
        return self.entropy is not None


def parse_scheme(text: str) -> Scheme:
    """Parse ``dg0 | dg1 | es1 | es2 | es3`` with optional ``f`` and ``s`` suffixes."""
    m = _SCHEME_RE.match(text.strip().lower())
    if m is None:
        raise ValueError(f"invalid scheme {text!r}; expected dg0, dg1 or es1/es2/es3 with optional 'f'/'s' suffixes")
    base, f, s = m.groups()
    if base == "dg0":
        if f or s:
            raise ValueError(f"invalid scheme {text!r}: P0 has no slopes or antidiffusive fluxes, use 'dg0'")
        return Scheme(order=0)
    entropy = int(base[2]) if base.startswith("es") else None
    return Scheme(order=1, entropy=entropy, flux_limit=bool(f), slope_limit=bool(s))


@dataclass
class LimiterInputs:
    """Per-side data seen from cell ``i`` with unit normal ``n`` towards ``j``.

    ``f_*``, ``psi_*`` hold normal components ``f(.) . n`` and ``psi(.) . n``;
    ``f_mid`` is ``f((u_i + u_j) / 2) . n``.
    """

    u_i: np.ndarray
    u_j: np.ndarray
    v_i: np.ndarray
    v_j: np.ndarray
    F_L: np.ndarray
    F_H: np.ndarray
    lam: np.ndarray
    f_i: np.ndarray
    f_j: np.ndarray
    f_mid: np.ndarray
    psi_i: np.ndarray
    psi_j: np.ndarray
    bar: np.ndarray
    umin_i: np.ndarray = -np.inf
    umax_i: np.ndarray = np.inf
    umin_j: np.ndarray = -np.inf
    umax_j: np.ndarray = np.inf


def limiter_inputs(law, u_i, u_j, F_L, F_H, lam, n, bounds_i=(-np.inf, np.inf), bounds_j=(-np.inf, np.inf)):
    """Assemble :class:`LimiterInputs` from cell averages and side-averaged fluxes."""
    u_i = np.asarray(u_i, dtype=float)
    u_j = np.asarray(u_j, dtype=float)

    def fn(u):
        return law.fx(u) * n[0] + law.fy(u) * n[1]

    def psin(u):
        return law.potential_component(u, 0) * n[0] + law.potential_component(u, 1) * n[1]

    f_i, f_j = fn(u_i), fn(u_j)
    lam = np.asarray(lam, dtype=float)
    safe = np.where(lam > 0.0, lam, 1.0)
    bar = 0.5 * (u_i + u_j) - np.where(lam > 0.0, (f_j - f_i) / (2.0 * safe), 0.0)
    return LimiterInputs(
        u_i=u_i, u_j=u_j,
        v_i=law.entropy_prime(u_i), v_j=law.entropy_prime(u_j),
        F_L=np.asarray(F_L, dtype=float), F_H=np.asarray(F_H, dtype=float),
        lam=lam, f_i=f_i, f_j=f_j, f_mid=fn(0.5 * (u_i + u_j)),
        psi_i=psin(u_i), psi_j=psin(u_j), bar=bar,
        umin_i=bounds_i[0], umax_i=bounds_i[1], umin_j=bounds_j[0], umax_j=bounds_j[1],
    )


def entropy_production_rate(inp: LimiterInputs):
    """``P_ij = (v_j - v_i)(F_H - F_L)`` for the side-averaged fluxes."""
    return (inp.v_j - inp.v_i) * (inp.F_H - inp.F_L)


def nu_ij(inp: LimiterInputs):
    """Extra interface dissipation coefficient, clipped to ``[0, lam / 2]``."""
    dv = inp.v_j - inp.v_i
    gap = 0.5 * (inp.f_i + inp.f_j) - inp.f_mid
    nonzero = dv != 0.0
    ratio = np.where(nonzero, gap / np.where(nonzero, dv, 1.0), 0.0)
    # max over the ratio (not the numerator alone) keeps nu symmetric in (i, j)
    return np.clip(np.maximum(ratio, 0.0), 0.0, 0.5 * inp.lam)


def q_bound(inp: LimiterInputs, variant: int):
    """Nonnegative entropy-production bound ``Q_ij`` for ES1, ES2 or ES3."""
    if variant not in (1, 2, 3):
        raise ValueError(f"unknown entropy variant {variant}")
    dv = inp.v_j - inp.v_i
    du = inp.u_j - inp.u_i
    dpsi = inp.psi_j - inp.psi_i
    if variant == 1:
        q = dpsi - dv * inp.F_L
    else:
        q_cd = dpsi - dv * 0.5 * (inp.f_i + inp.f_j)
        coef = 0.5 * inp.lam if variant == 2 else 0.5 * inp.lam - nu_ij(inp)
        q = dv * coef * du + np.minimum(0.0, q_cd)
    return np.maximum(q, 0.0)


def alpha_es(inp: LimiterInputs, variant: int):
    P = entropy_production_rate(inp)
    Q = q_bound(inp, variant)
    limited = P > Q
    return np.where(limited, Q / np.where(limited, P, 1.0), 1.0)


def alpha_bp(inp: LimiterInputs):
    """Largest factor keeping both flux-corrected bar states in local bounds.

    With outward fluxes the average update of cell ``i`` is a convex
    combination of ``bar - alpha F_A / lam`` over its sides, and cell ``j``
    sees ``bar + alpha F_A / lam``.
    """
    FA = inp.F_H - inp.F_L
    lam = inp.lam
    pos = FA > 0.0
    # headroom in the direction each state moves, both nonnegative for admissible bars
    room_i = np.where(pos, inp.bar - inp.umin_i, inp.umax_i - inp.bar)
    room_j = np.where(pos, inp.umax_j - inp.bar, inp.bar - inp.umin_j)
    ok = FA != 0.0
    mag = np.where(ok, np.abs(FA), 1.0)
    with np.errstate(invalid="ignore"):
        # lam == 0 leaves no room; inf headroom (ghost side) imposes nothing
        a = lam * np.minimum(room_i, room_j) / mag
    a = np.where(np.isnan(a), 0.0, a)
    return np.where(ok, np.clip(a, 0.0, 1.0), 1.0)


def bounded_bar_state(inp: LimiterInputs, alpha):
    """Flux-corrected bar state of cell ``i``, ``bar - alpha (F_H - F_L) / lam``."""
    lam = inp.lam
    safe = np.where(lam > 0.0, lam, 1.0)
    return inp.bar - np.where(lam > 0.0, alpha * (inp.F_H - inp.F_L) / safe, 0.0)


def scheme_alpha(scheme: Scheme, inp: Optional[LimiterInputs], shape=()):
    """Correction factor the scheme applies to each side."""
    if scheme.order == 0:
        return np.zeros(shape)
    alpha = np.ones(shape if inp is None else np.shape(inp.F_H))
    if scheme.entropy_fix:
        alpha = np.minimum(alpha, alpha_es(inp, scheme.entropy))
    if scheme.flux_limit:
        alpha = np.minimum(alpha, alpha_bp(inp))
    return alpha


def combine_and_limit(F_L, F_H, alpha):
    """Blend low- and high-order moments with one factor per side, broadcasting over moments."""
    F_L = np.asarray(F_L, dtype=float)
    F_H = np.asarray(F_H, dtype=float)
    a = np.asarray(alpha, dtype=float)
    if F_L.ndim > a.ndim:
        a = a[..., None]
    return (1.0 - a) * F_L + a * F_H


# -- local bounds and slope limiting ---------------------------------------

def local_bounds(mesh: Mesh, averages: np.ndarray, ghost_value: float):
    """Min/max of cell averages over the vertex stencil, arrays of shape (ny, nx)."""
    A = pad(mesh, averages.reshape(mesh.ny, mesh.nx), ghost_value)
    ny, nx = mesh.ny, mesh.nx
    windows = [A[dy:dy + ny, dx:dx + nx] for dy in range(3) for dx in range(3)]
    return np.minimum.reduce(windows), np.maximum.reduce(windows)


def vertex_bounds(mesh: Mesh, averages: np.ndarray, ghost_value: float):
    """Min/max of cell averages over the cells sharing each vertex, shape (ny+1, nx+1)."""
    A = pad(mesh, averages.reshape(mesh.ny, mesh.nx), ghost_value)
    quads = [A[:-1, :-1], A[:-1, 1:], A[1:, :-1], A[1:, 1:]]
    return np.minimum.reduce(quads), np.maximum.reduce(quads)


_VERTEX_OFFSETS = ((-0.5, -0.5, 0, 0), (0.5, -0.5, 0, 1), (0.5, 0.5, 1, 1), (-0.5, 0.5, 1, 0))


def slope_factors(mesh: Mesh, solution: np.ndarray, ghost_value: float) -> np.ndarray:
    """Vertex-based limiting factor ``beta_i`` per cell."""
    grid = solution.reshape(mesh.ny, mesh.nx, 3)
    u0, u1, u2 = grid[..., 0], grid[..., 1], grid[..., 2]
    vmin, vmax = vertex_bounds(mesh, grid[..., 0], ghost_value)
    ny, nx = mesh.ny, mesh.nx
    beta = np.ones((ny, nx))
    for sx, sy, oy, ox in _VERTEX_OFFSETS:
        d = sx * u1 + sy * u2
        lo = vmin[oy:oy + ny, ox:ox + nx]
        hi = vmax[oy:oy + ny, ox:ox + nx]
        pos, neg = d > 0.0, d < 0.0
        safe = np.where(d != 0.0, d, 1.0)
        b = np.where(pos, (hi - u0) / safe, np.where(neg, (lo - u0) / safe, 1.0))
        beta = np.minimum(beta, b)
    return np.clip(beta, 0.0, 1.0).ravel()


def vertex_slope_limit(mesh: Mesh, solution: np.ndarray, ghost_value: float = 0.0):
    """Scale slopes by ``beta_i``; cell averages are untouched.

    Returns ``(beta, limited_solution)``.
    """
    beta = slope_factors(mesh, solution, ghost_value)
    out = solution.copy()
    out[:, 1:] *= beta[:, None]
    return beta, out
