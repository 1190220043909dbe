"""Time integration of the reduced DG-P1 system with SSP-RK3.

Each Runge-Kutta stage is a forward Euler update: explicit for the cell
averages, semi-implicit in the entropy viscosity for the slopes, optionally
followed by vertex-based slope limiting.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import entropy as ent
from .dg import DEFAULT_RULES, QuadratureRules, face_fluxes, mass_diagonal, padded_solution, volume_integrals
from .limiters import LimiterInputs, Scheme, local_bounds, scheme_alpha, vertex_slope_limit
from .mesh import Mesh, pad
from .problems import ConservationLaw

log = logging.getLogger(__name__)

#: slack allowed on the local maximum principle for cell averages
LMP_TOL = 1e-11
#: relative slack on the semi-discrete cell entropy inequality
ENTROPY_TOL = 1e-10


class SolverError(RuntimeError):
    """Base class for aborted time steps."""


class CFLViolation(SolverError):
    pass


class NonFiniteState(SolverError):
    pass


class BoundViolation(SolverError):
    """The local maximum principle failed for a flux-limited stage."""


@dataclass
class StageData:
    """Everything a stage derives from its input state."""

    rhs: np.ndarray          # (n, 3) moment right-hand sides
    nu: np.ndarray           # (n,) entropy viscosity
    umin: np.ndarray         # (n,) local bounds of the cell averages
    umax: np.ndarray
    production: np.ndarray   # (n,) P_i
    g_sum: np.ndarray        # (n,) sum_j |S_ij| G_ij
    dissipation: np.ndarray  # (n,) D_i
    alpha_x: np.ndarray
    alpha_y: np.ndarray
    dt_max: float

    @property
    def entropy_residual(self) -> np.ndarray:
        return self.production + self.g_sum - self.nu * self.dissipation

    @property
    def scaled_entropy_residual(self) -> np.ndarray:
        return self.entropy_residual / np.maximum(1.0, np.abs(self.production))


@dataclass
class StageReport:
    lmp_violations: int
    max_entropy_residual: float
    min_alpha: float


class Solver:
    """Spatial operator and stage update for one (mesh, law, scheme) triple."""

    def __init__(self, mesh: Mesh, law: ConservationLaw, scheme: Scheme, rules: QuadratureRules = DEFAULT_RULES):
        self.mesh = mesh
        self.law = law
        self.scheme = scheme
        self.rules = rules
        self.mass = mass_diagonal(mesh.hx, mesh.hy)

    @property
    def ghost_value(self) -> float:
        return self.law.background

    def _pad_bounds(self, b: np.ndarray, fill: float) -> np.ndarray:
        return pad(self.mesh, b, fill)

    def _block_inputs(self, blk, psi_m, psi_p, bmin, bmax) -> LimiterInputs:
        law = self.law
        fa = law.fx if blk.axis == 0 else law.fy
        if blk.axis == 0:
            mn = (bmin[1:-1, :-1], bmax[1:-1, :-1])
            pl = (bmin[1:-1, 1:], bmax[1:-1, 1:])
        else:
            mn = (bmin[:-1, 1:-1], bmax[:-1, 1:-1])
            pl = (bmin[1:, 1:-1], bmax[1:, 1:-1])
        return LimiterInputs(
            u_i=blk.u_minus, u_j=blk.u_plus,
            v_i=law.entropy_prime(blk.u_minus), v_j=law.entropy_prime(blk.u_plus),
            F_L=blk.avg_low, F_H=blk.avg_high, lam=blk.lam,
            f_i=fa(blk.u_minus), f_j=fa(blk.u_plus), f_mid=fa(0.5 * (blk.u_minus + blk.u_plus)),
            psi_i=psi_m, psi_j=psi_p, bar=blk.bar,
            umin_i=mn[0], umax_i=mn[1], umin_j=pl[0], umax_j=pl[1],
        )

    def evaluate(self, U: np.ndarray) -> StageData:
        mesh, law, scheme = self.mesh, self.law, self.scheme
        ny, nx = mesh.ny, mesh.nx
        hx, hy = mesh.hx, mesh.hy
        grid = U.reshape(ny, nx, 3)
        bad = ~np.isfinite(U).all(axis=1)
        if bad.any():
            raise NonFiniteState(f"non-finite state in cell {int(np.flatnonzero(bad)[0])}")
        Up = padded_solution(mesh, law, U)
        high = scheme.order == 1
        bx = face_fluxes(law, Up, self.rules, 0, high)
        by = face_fluxes(law, Up, self.rules, 1, high)

        umin, umax = local_bounds(mesh, grid[..., 0], self.ghost_value)
        # ghost cells are never updated, so they impose no constraint
        pmin = self._pad_bounds(umin, -np.inf)
        pmax = self._pad_bounds(umax, np.inf)

        u0p = Up[..., 0]
        psi_x = law.potential_component(u0p, 0)
        psi_y = law.potential_component(u0p, 1)
        inp_x = self._block_inputs(bx, psi_x[1:-1, :-1], psi_x[1:-1, 1:], pmin, pmax)
        inp_y = self._block_inputs(by, psi_y[:-1, 1:-1], psi_y[1:, 1:-1], pmin, pmax)
        ax = scheme_alpha(scheme, inp_x, bx.lam.shape)
        ay = scheme_alpha(scheme, inp_y, by.lam.shape)

        Ax = bx.avg_low + ax * (bx.avg_high - bx.avg_low)
        Ay = by.avg_low + ay * (by.avg_high - by.avg_low)
        Tx = ax * bx.tr_high
        Ty = ay * by.tr_high

        rhs = np.zeros((ny, nx, 3))
        # cell is 'plus' on its W/S sides and 'minus' on its E/N sides
        rhs[..., 0] = -hy * (Ax[:, 1:] - Ax[:, :-1]) - hx * (Ay[1:, :] - Ay[:-1, :])
        if high:
            vx, vy = volume_integrals(law, mesh, grid, self.rules)
            rhs[..., 1] = -hy * 0.5 * (Ax[:, :-1] + Ax[:, 1:]) - hx * (Ty[1:, :] - Ty[:-1, :]) + vx
            rhs[..., 2] = -hy * (Tx[:, 1:] - Tx[:, :-1]) - hx * 0.5 * (Ay[:-1, :] + Ay[1:, :]) + vy
        rhs = rhs.reshape(-1, 3)

        coeffs = ent.entropy_coeffs(law, U)
        production = ent.entropy_production(law, coeffs, rhs)
        Gx = ent.interface_entropy_flux(inp_x.v_i, inp_x.v_j, Ax, inp_x.psi_i, inp_x.psi_j)
        Gy = ent.interface_entropy_flux(inp_y.v_i, inp_y.v_j, Ay, inp_y.psi_i, inp_y.psi_j)
        g_sum = (hy * (Gx[:, 1:] - Gx[:, :-1]) + hx * (Gy[1:, :] - Gy[:-1, :])).ravel()
        D = ent.dissipation(hx, hy, coeffs)
        if scheme.entropy_fix:
            nu = ent.entropy_viscosity(production, g_sum, D, mesh.cell_area)
        else:
            nu = np.zeros(mesh.n_cells)

        lam_sum = hy * (bx.lam[:, :-1] + bx.lam[:, 1:]) + hx * (by.lam[:-1, :] + by.lam[1:, :])
        peak = lam_sum.max()
        dt_max = mesh.cell_area / peak if peak > 0 else np.inf

        return StageData(
            rhs=rhs, nu=nu, umin=umin.ravel(), umax=umax.ravel(),
            production=production, g_sum=g_sum, dissipation=D,
            alpha_x=ax, alpha_y=ay, dt_max=float(dt_max),
        )

    def max_stable_dt(self, U: np.ndarray) -> float:
        return self.evaluate(U).dt_max

    def stage(self, U: np.ndarray, dt: float, data: Optional[StageData] = None) -> tuple[np.ndarray, StageReport]:
        """One forward Euler stage from ``U``; returns the new solution and a report."""
        data = self.evaluate(U) if data is None else data
        scheme = self.scheme
        if scheme.flux_limit and dt > data.dt_max * (1.0 + 1e-12):
            raise CFLViolation(f"dt={dt:g} exceeds the bound-preserving limit {data.dt_max:g}")
        m0, m1, m2 = self.mass
        out = np.empty_like(U)
        out[:, 0] = U[:, 0] + dt / m0 * data.rhs[:, 0]
        if scheme.order == 1:
            damp = 1.0 + dt * data.nu * self.law.entropy_second(U[:, 0])
            out[:, 1] = (m1 * U[:, 1] + dt * data.rhs[:, 1]) / (m1 * damp)
            out[:, 2] = (m2 * U[:, 2] + dt * data.rhs[:, 2]) / (m2 * damp)
        else:
            out[:, 1:] = 0.0
        bad = ~np.isfinite(out).all(axis=1)
        if bad.any():
            raise NonFiniteState(f"non-finite state in cell {int(np.flatnonzero(bad)[0])}")
        outside = (out[:, 0] < data.umin - LMP_TOL) | (out[:, 0] > data.umax + LMP_TOL)
        n_out = int(outside.sum())
        if scheme.flux_limit and n_out:
            c = int(np.flatnonzero(outside)[0])
            raise BoundViolation(
                f"cell {c}: average {out[c, 0]!r} outside [{data.umin[c]!r}, {data.umax[c]!r}]"
            )
        if scheme.slope_limit:
            _, out = vertex_slope_limit(self.mesh, out, self.ghost_value)
        alpha_min = min(float(data.alpha_x.min()), float(data.alpha_y.min()))
        report = StageReport(n_out, float(data.scaled_entropy_residual.max()), alpha_min)
        return out, report


@dataclass
class StepDiagnostics:
    step: int
    t: float
    min: float
    max: float
    mass: float
    entropy: float
    max_entropy_residual: float
    lmp_violations: int

    FIELDS = ("step", "t", "min", "max", "mass", "entropy", "max_entropy_residual", "lmp_violations")

    def row(self) -> list:
        return [getattr(self, name) for name in self.FIELDS]


@dataclass
class RunState:
    solver: Solver
    solution: np.ndarray
    t: float = 0.0
    step: int = 0
    dt: float = 0.0
    history: list = field(default_factory=list)
    stage_reports: list = field(default_factory=list)


def max_stable_dt(mesh: Mesh, law: ConservationLaw, solution: np.ndarray, rules: QuadratureRules = DEFAULT_RULES) -> float:
    """Largest dt with ``dt * sum_j |S_ij| lam_ij <= |K_i|`` for every cell."""
    return Solver(mesh, law, Scheme(order=0), rules).max_stable_dt(solution)


def forward_euler_stage(state: RunState, dt: float) -> np.ndarray:
    out, report = state.solver.stage(state.solution, dt)
    state.stage_reports.append(report)
    return out


def ssp_rk3_step(state: RunState, dt: float) -> RunState:
    """Advance by one Shu-Osher SSP-RK3 step in place and return the state."""
    solver = state.solver
    un = state.solution
    u1, r1 = solver.stage(un, dt)
    fe, r2 = solver.stage(u1, dt)
    u2 = 0.75 * un + 0.25 * fe
    fe, r3 = solver.stage(u2, dt)
    state.solution = un / 3.0 + (2.0 / 3.0) * fe
    state.stage_reports = [r1, r2, r3]
    state.t += dt
    state.step += 1
    state.dt = dt
    return state


def record(state: RunState) -> StepDiagnostics:
    from .diagnostics import global_range, total_entropy

    solver = state.solver
    lo, hi = global_range(state.solution, solver.mesh)
    reports = state.stage_reports
    diag = StepDiagnostics(
        step=state.step,
        t=state.t,
        min=lo,
        max=hi,
        mass=float(solver.mesh.cell_area * state.solution[:, 0].sum()),
        entropy=total_entropy(solver.law, state.solution, solver.mesh, solver.rules),
        max_entropy_residual=max((r.max_entropy_residual for r in reports), default=0.0),
        lmp_violations=sum(r.lmp_violations for r in reports),
    )
    state.history.append(diag)
    return diag


def initial_state(config) -> RunState:
    from .dg import gauss_rules, project_initial_condition
    from .mesh import build_uniform_mesh
    from .problems import get_problem

    law = config.law if getattr(config, "law", None) is not None else get_problem(config.problem)
    mesh = build_uniform_mesh(config.domain or law.default_domain, config.nx, config.ny,
                              config.boundary_mode or law.default_boundary)
    rules = gauss_rules(config.edge_quadrature, config.volume_quadrature)
    solver = Solver(mesh, law, config.scheme, rules)
    U = project_initial_condition(law, mesh, rules)
    if config.scheme.order == 0:
        U[:, 1:] = 0.0
    elif config.scheme.slope_limit:
        # the projection of discontinuous data overshoots at the vertices
        _, U = vertex_slope_limit(mesh, U, solver.ghost_value)
    return RunState(solver=solver, solution=U)


def step_count(t_end: float, dt: float) -> int:
    """Number of fixed steps to reach ``t_end``; the last one may be shortened."""
    return int(np.ceil(t_end / dt - 1e-9)) if t_end > 0 else 0


def run(config, on_output: Optional[Callable[[RunState], None]] = None, on_cfl: str = "raise") -> RunState:
    """Integrate from t = 0 to ``config.t_end`` with a fixed step.

    With flux limiting active, a step above the bound-preserving limit either
    raises :class:`CFLViolation` (``on_cfl="raise"``) or is clipped
    (``on_cfl="clip"``).
    """
    state = initial_state(config)
    dt = float(config.dt)
    if config.scheme.flux_limit:
        dt_max = state.solver.max_stable_dt(state.solution)
        if dt > dt_max * (1.0 + 1e-12):
            if on_cfl == "clip":
                log.info("clipping dt from %g to %g", dt, dt_max)
                dt = dt_max
            else:
                raise CFLViolation(f"dt={dt:g} exceeds the bound-preserving limit {dt_max:g}")
    state.dt = dt
    record(state)
    if on_output is not None:
        on_output(state)
    t_end = float(config.t_end)
    n_steps = step_count(t_end, dt)
    every = int(getattr(config, "output_every", 0) or 0)
    for n in range(n_steps):
        h = min(dt, t_end - state.t) if n == n_steps - 1 else dt
        ssp_rk3_step(state, h)
        if n == n_steps - 1:
            state.t = t_end
        record(state)
        if on_output is not None and every and state.step % every == 0:
            on_output(state)
        log.debug("step %d t=%.6f range=[%.6f, %.6f]", state.step, state.t, state.history[-1].min, state.history[-1].max)
    return state
