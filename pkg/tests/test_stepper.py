import dataclasses

import numpy as np
import pytest

from esdg.config import RunConfig
from esdg.dg import project_initial_condition
from esdg.limiters import parse_scheme
from esdg.mesh import build_uniform_mesh
from esdg.problems import buckley_leverett_problem, kpp_problem, linear_advection_problem
from esdg.stepper import (
    CFLViolation,
    NonFiniteState,
    RunState,
    Solver,
    forward_euler_stage,
    initial_state,
    max_stable_dt,
    run,
    ssp_rk3_step,
    step_count,
)

KPP = kpp_problem()
SCHEMES = ["dg0", "dg1", "dg1f", "dg1s", "dg1fs", "es1", "es2", "es3", "es1f", "es2fs", "es3s"]


def test_max_stable_dt_unit_speed():
    h = 1 / 16
    mesh = build_uniform_mesh((0, 1, 0, 1), 16, 16, "periodic")
    U = np.zeros((mesh.n_cells, 3))
    adv = linear_advection_problem((1.0, 1.0))
    assert max_stable_dt(mesh, KPP, U) == pytest.approx(h / 4, rel=1e-14)
    assert max_stable_dt(mesh, adv, U) == pytest.approx(h / 4, rel=1e-14)
    fast = linear_advection_problem((2.0, 2.0))
    assert max_stable_dt(mesh, fast, U) == pytest.approx(max_stable_dt(mesh, adv, U) / 2, rel=1e-14)


def test_kpp_benchmark_step_is_admissible():
    mesh = build_uniform_mesh(KPP.default_domain, 512, 512, KPP.default_boundary)
    U = project_initial_condition(KPP, mesh)
    dt_max = max_stable_dt(mesh, KPP, U)
    assert dt_max == pytest.approx((1 / 128) / 4)
    assert 1e-3 < dt_max


def test_step_counts():
    assert step_count(1.0, 1e-3) == 1000
    assert step_count(0.5, 1e-3) == 500
    assert step_count(0.0, 1e-3) == 0
    assert step_count(0.25, 0.1) == 3


def _solver(scheme, n=8, law=None, mode="periodic"):
    law = law or KPP
    mesh = build_uniform_mesh((0, 1, 0, 1), n, n, mode)
    return Solver(mesh, law, parse_scheme(scheme))


@pytest.mark.parametrize("scheme", SCHEMES)
def test_constant_state_is_a_fixed_point(scheme):
    solver = _solver(scheme)
    U = np.zeros((solver.mesh.n_cells, 3))
    U[:, 0] = 1.7
    state = RunState(solver=solver, solution=U.copy())
    ssp_rk3_step(state, 1e-3)
    assert np.max(np.abs(state.solution - U)) < 1e-15


@pytest.mark.parametrize("scheme", SCHEMES)
def test_stage_conserves_mass(scheme):
    solver = _solver(scheme, law=linear_advection_problem((1.0, 0.5)))
    rng = np.random.default_rng(5)
    U = rng.normal(0.0, 1.0, (solver.mesh.n_cells, 3)) * [1.0, 0.2, 0.2]
    if scheme == "dg0":
        U[:, 1:] = 0.0
    state = RunState(solver=solver, solution=U)
    out = forward_euler_stage(state, 0.2 * solver.max_stable_dt(U))
    scale = np.abs(U[:, 0]).sum()
    assert abs(out[:, 0].sum() - U[:, 0].sum()) <= 1e-13 * scale
    assert len(state.stage_reports) == 1


def test_input_state_is_not_mutated():
    solver = _solver("es1fs")
    U = project_initial_condition(KPP, solver.mesh, func=lambda x, y: 1 + np.sin(6 * x) * np.cos(4 * y))
    before = U.copy()
    solver.stage(U, 1e-3)
    assert np.array_equal(U, before)


def test_entropy_viscosity_damps_slopes():
    solver = _solver("es1")
    rng = np.random.default_rng(8)
    U = rng.normal(0.0, 1.0, (solver.mesh.n_cells, 3))
    data = solver.evaluate(U)
    data.rhs[:, 1:] = 0.0
    data.nu[:] = 2.0
    a, _ = solver.stage(U, 1e-2, data)
    data.nu[:] = 4.0
    b, _ = solver.stage(U, 1e-2, data)
    assert np.all(np.abs(a[:, 1:]) < np.abs(U[:, 1:]))
    assert np.all(np.abs(b[:, 1:]) < np.abs(a[:, 1:]))
    assert np.array_equal(a[:, 0], b[:, 0])


def test_cfl_guard_for_flux_limited_stage():
    solver = _solver("es1f")
    U = np.ones((solver.mesh.n_cells, 3))
    with pytest.raises(CFLViolation):
        solver.stage(U, 2 * solver.max_stable_dt(U))
    # without bound-preserving limiting the step is the user's responsibility
    _solver("es1").stage(U, 2 * solver.max_stable_dt(U))


def test_non_finite_state_aborts():
    solver = _solver("dg1")
    U = np.ones((solver.mesh.n_cells, 3))
    U[3, 1] = np.inf
    with pytest.raises(NonFiniteState, match="cell"):
        solver.stage(U, 1e-3)


def test_rk3_local_error_is_fourth_order():
    law = linear_advection_problem((1.0, 1.0))
    mesh = build_uniform_mesh((0, 1, 0, 1), 16, 16, "periodic")
    solver = Solver(mesh, law, parse_scheme("dg1"))
    U = project_initial_condition(law, mesh)

    def advance(dt, n):
        state = RunState(solver=solver, solution=U.copy())
        for _ in range(n):
            ssp_rk3_step(state, dt)
        return state.solution

    errs = []
    for dt in (4e-3, 2e-3):
        errs.append(np.abs(advance(dt, 1) - advance(dt / 8, 8)).max())
    assert errs[0] / errs[1] == pytest.approx(16.0, rel=0.1)


def _cfg(problem, scheme, n, dt, t_end, **kw):
    return RunConfig(problem=problem, scheme=parse_scheme(scheme), nx=n, ny=n, dt=dt, t_end=t_end, **kw)


def test_run_lands_on_t_end():
    state = run(_cfg("kpp", "es1fs", 8, 0.03, 0.1))
    assert state.step == 4 and state.t == 0.1
    assert [d.step for d in state.history] == [0, 1, 2, 3, 4]
    assert all(b.t > a.t for a, b in zip(state.history, state.history[1:]))


def test_run_with_zero_end_time_is_the_projection():
    state = run(_cfg("kpp", "es1fs", 16, 1e-3, 0.0))
    ref = initial_state(_cfg("kpp", "es1fs", 16, 1e-3, 0.0)).solution
    assert state.step == 0 and np.array_equal(state.solution, ref)


def test_run_cfl_handling():
    cfg = _cfg("kpp", "es1f", 8, 1.0, 0.5)
    with pytest.raises(CFLViolation):
        run(cfg)
    state = run(cfg, on_cfl="clip")
    # KPP default domain is 4 wide, so h = 1/2 and dt_max = h / 4
    assert state.dt == pytest.approx(0.125)


def test_dg0_initial_state_has_no_slopes():
    state = initial_state(_cfg("kpp", "dg0", 16, 1e-3, 0.0))
    assert np.all(state.solution[:, 1:] == 0.0)


def test_runs_are_bit_reproducible():
    a = run(_cfg("buckley_leverett", "es2fs", 12, 1e-3, 0.02))
    b = run(_cfg("buckley_leverett", "es2fs", 12, 1e-3, 0.02))
    assert a.solution.tobytes() == b.solution.tobytes()


# unlimited slopes overflow the rational Buckley-Leverett flux, so BL gets dg1fs
@pytest.mark.parametrize("problem, scheme", [
    ("kpp", "dg1f"), ("kpp", "es1f"), ("kpp", "es2fs"), ("kpp", "es3fs"),
    ("buckley_leverett", "dg1fs"), ("buckley_leverett", "es1f"), ("buckley_leverett", "es2fs"),
    ("buckley_leverett", "es3fs"),
])
def test_flux_limited_runs_keep_local_bounds(problem, scheme):
    law = kpp_problem() if problem == "kpp" else buckley_leverett_problem()
    n = 32
    extent = law.default_domain[1] - law.default_domain[0]
    dt = 0.9 * (extent / n) / (4 * (law.gms if np.isscalar(law.gms) else max(law.gms)))
    state = run(_cfg(problem, scheme, n, dt, 20 * dt))
    assert sum(d.lmp_violations for d in state.history) == 0
    lo, hi = law.invariant_bounds
    assert state.solution[:, 0].min() >= lo - 1e-9 and state.solution[:, 0].max() <= hi + 1e-9


def test_output_callback_interval():
    seen = []
    dataclass_cfg = dataclasses.replace(_cfg("kpp", "dg0", 8, 0.01, 0.05), output_every=2)
    run(dataclass_cfg, on_output=lambda s: seen.append(s.step))
    assert seen == [0, 2, 4]


def test_slope_limited_initial_state_respects_vertex_bounds():
    from esdg.diagnostics import global_range

    raw = initial_state(_cfg("buckley_leverett", "es1", 24, 1e-3, 0.0)).solution
    state = initial_state(_cfg("buckley_leverett", "es1s", 24, 1e-3, 0.0))
    assert np.array_equal(raw[:, 0], state.solution[:, 0])
    lo, hi = global_range(state.solution, state.solver.mesh)
    assert -1e-14 <= lo and hi <= 1.0 + 1e-14
    assert global_range(raw, state.solver.mesh)[1] > 1.0
