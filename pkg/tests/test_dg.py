import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from esdg.dg import (
    DEFAULT_RULES,
    bar_state,
    basis_eval,
    evaluate_at,
    gauss_rules,
    llf_flux,
    mass_diagonal,
    project_initial_condition,
    side_fluxes,
    volume_flux_integral,
)
from esdg.limiters import parse_scheme
from esdg.mesh import build_uniform_mesh, edge_neighbors
from esdg.problems import buckley_leverett_problem, kpp_problem, linear_advection_problem
from esdg.stepper import Solver

W, E, S, N = range(4)
LAWS = [kpp_problem(), buckley_leverett_problem(), linear_advection_problem((1.0, -0.5))]


def test_quadrature_weights():
    for q in (1, 2, 3, 5):
        rules = gauss_rules(q, q)
        assert np.all(rules.edge_weights > 0) and np.all(rules.volume_weights > 0)
        _, w = rules.edge_rule(0.25)
        assert w.sum() == pytest.approx(0.25, abs=1e-15)
        _, wv = rules.volume_rule(0.5)
        assert wv.sum() == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ValueError):
        gauss_rules(0, 3)


def test_basis_eval():
    mesh = build_uniform_mesh((0, 1, 0, 1), 4, 4)
    c = mesh.cell_index(1, 2)
    xc, yc = mesh.cell(c).centroid
    assert basis_eval(mesh, c, 0, [0.3, 0.9]) == 1.0
    assert basis_eval(mesh, c, 1, [xc, yc]) == 0.0
    assert basis_eval(mesh, c, 1, [xc + mesh.hx / 2, yc]) == pytest.approx(0.5)
    assert basis_eval(mesh, c, 2, [xc, yc - mesh.hy / 2]) == pytest.approx(-0.5)


def test_mass_diagonal():
    h = 0.1
    assert np.allclose(mass_diagonal(h, h), (h * h, h * h / 12, h * h / 12))
    assert np.allclose(mass_diagonal(2 * h, h), (2 * h * h, 2 * h * h / 12, 2 * h * h / 12))
    # analytic check of the orthogonality and diagonal entries by a refined rule
    rules = gauss_rules(3, 4)
    pts, w = rules.volume_rule(h * h)
    phi = np.stack([np.ones(len(w)), pts[:, 0], pts[:, 1]])
    M = (phi * w) @ phi.T
    assert np.allclose(M, np.diag(mass_diagonal(h, h)), atol=1e-17)


def test_llf_flux_examples():
    kpp = kpp_problem()
    assert llf_flux(kpp, 0.7, 0.7, (0.6, 0.8), 1.0) == pytest.approx(np.sin(0.7) * 0.6 + np.cos(0.7) * 0.8)
    adv = linear_advection_problem((1.0, 0.0))
    assert llf_flux(adv, 0.3, -2.0, (1.0, 0.0), 1.0) == pytest.approx(0.3)
    ui, uj = np.pi / 4, 14 * np.pi / 4
    expect = 0.5 * (np.sin(uj) + np.sin(ui)) - 0.5 * (uj - ui)
    assert llf_flux(kpp, ui, uj, (1.0, 0.0), 1.0) == pytest.approx(expect, abs=1e-14)
    # frozen from an independent scalar evaluation
    assert llf_flux(kpp, ui, uj, (1.0, 0.0), 1.0) == pytest.approx(-5.25153467149014, abs=1e-13)


@pytest.mark.parametrize("law", LAWS, ids=lambda l: l.name)
def test_llf_antisymmetry(law):
    rng = np.random.default_rng(0)
    lo, hi = law.invariant_bounds
    uL, uR = rng.uniform(lo, hi, (2, 1000))
    for n in ((1.0, 0.0), (0.0, 1.0)):
        lam = 3.4
        a = llf_flux(law, uL, uR, n, lam)
        b = llf_flux(law, uR, uL, (-n[0], -n[1]), lam)
        assert np.max(np.abs(a + b)) < 1e-14


@pytest.mark.parametrize("law", LAWS, ids=lambda l: l.name)
def test_bar_state_bracketing(law):
    from esdg.problems import max_wave_speed

    rng = np.random.default_rng(1)
    lo, hi = law.invariant_bounds
    ui, uj = rng.uniform(lo, hi, (2, 10_000))
    for n in ((1.0, 0.0), (0.0, -1.0)):
        lam = max_wave_speed(law, ui, uj, n)
        bar = bar_state(law, ui, uj, n, lam)
        tol = 1e-12 * max(1.0, hi)
        assert np.all(bar >= np.minimum(ui, uj) - tol)
        assert np.all(bar <= np.maximum(ui, uj) + tol)


def _random_solution(mesh, law, seed):
    rng = np.random.default_rng(seed)
    lo, hi = law.invariant_bounds
    U = np.empty((mesh.n_cells, 3))
    U[:, 0] = rng.uniform(lo, hi, mesh.n_cells)
    U[:, 1:] = rng.normal(0.0, 0.1 * (hi - lo), (mesh.n_cells, 2))
    return U


@pytest.mark.parametrize("mode", ["periodic", "ghost-constant"])
def test_constant_state_side_fluxes(mode):
    law = kpp_problem()
    mesh = build_uniform_mesh((0, 1, 0, 1), 3, 3, mode)
    c = law.background if mode == "ghost-constant" else 2.0
    U = np.zeros((mesh.n_cells, 3))
    U[:, 0] = c
    for cell in range(mesh.n_cells):
        for d in range(4):
            sf = side_fluxes(law, mesh, U, cell, d)
            n = edge_neighbors(mesh, cell)[d][2]
            fn = np.sin(c) * n[0] + np.cos(c) * n[1]
            assert sf.F_L[0] == pytest.approx(fn, abs=1e-14)
            assert sf.F_H[0] == pytest.approx(fn, abs=1e-14)
            assert sf.bar_ij == pytest.approx(c, abs=1e-14)


@pytest.mark.parametrize("law", LAWS, ids=lambda l: l.name)
def test_side_flux_conservation(law):
    mesh = build_uniform_mesh((0, 1, 0, 1), 4, 3, "periodic")
    U = _random_solution(mesh, law, 2)
    opposite = {W: E, E: W, S: N, N: S}
    for cell in range(mesh.n_cells):
        for d in range(4):
            nb = edge_neighbors(mesh, cell)[d][1]
            a = side_fluxes(law, mesh, U, cell, d)
            b = side_fluxes(law, mesh, U, nb, opposite[d])
            assert a.F_L[0] == pytest.approx(-b.F_L[0], abs=1e-13)
            assert a.F_H[0] == pytest.approx(-b.F_H[0], abs=1e-13)
            assert a.lam == b.lam


def test_low_order_moments_follow_face_offset():
    law = kpp_problem()
    mesh = build_uniform_mesh((0, 1, 0, 1), 3, 3, "periodic")
    U = _random_solution(mesh, law, 3)
    c = mesh.cell_index(1, 1)
    offsets = {W: (1, -0.5), E: (1, 0.5), S: (2, -0.5), N: (2, 0.5)}
    for d, (k, off) in offsets.items():
        sf = side_fluxes(law, mesh, U, c, d)
        assert sf.F_L[k] == pytest.approx(off * sf.F_L[0], abs=1e-13)
        assert sf.F_L[3 - k] == pytest.approx(0.0, abs=1e-13)


def test_side_fluxes_reject_non_finite():
    law = kpp_problem()
    mesh = build_uniform_mesh((0, 1, 0, 1), 2, 2, "periodic")
    U = np.ones((4, 3))
    U[1, 0] = np.nan
    with pytest.raises(FloatingPointError):
        side_fluxes(law, mesh, U, 0, E)


def test_volume_flux_integral_examples():
    mesh = build_uniform_mesh((0, 1, 0, 1), 4, 4)
    U = np.zeros((mesh.n_cells, 3))
    U[:, 0] = 0.7
    adv = linear_advection_problem((1.0, 0.0))
    kpp = kpp_problem()
    assert volume_flux_integral(adv, mesh, U, 5, 0) == 0.0
    assert volume_flux_integral(adv, mesh, U, 5, 1) == pytest.approx(0.7 * mesh.cell_area / mesh.hx)
    assert volume_flux_integral(kpp, mesh, U, 5, 2) == pytest.approx(mesh.cell_area * np.cos(0.7) / mesh.hy)


def test_project_examples():
    kpp = kpp_problem()
    mesh = build_uniform_mesh((-1, 1, -1, 1), 8, 8)
    U = project_initial_condition(kpp, mesh, func=lambda x, y: 0 * x + 2.5)
    assert np.allclose(U[:, 0], 2.5) and np.all(U[:, 1:] == 0)
    one = build_uniform_mesh((-0.5, 0.5, -0.5, 0.5), 1, 1)
    V = project_initial_condition(kpp, one, func=lambda x, y: x)
    assert np.allclose(V[0], [0.0, one.hx, 0.0], atol=1e-15)
    K = project_initial_condition(kpp, build_uniform_mesh(kpp.default_domain, 64, 64))
    assert K[:, 0].min() >= np.pi / 4 - 1e-14 and K[:, 0].max() <= 14 * np.pi / 4 + 1e-14


@settings(max_examples=50, deadline=None)
@given(
    a=st.floats(-5, 5), b=st.floats(-5, 5), c=st.floats(-5, 5),
    nx=st.integers(1, 6), ny=st.integers(1, 6),
)
def test_projection_reproduces_linear_fields(a, b, c, nx, ny):
    mesh = build_uniform_mesh((-1.0, 2.0, 0.5, 1.5), nx, ny)
    law = kpp_problem()
    U = project_initial_condition(law, mesh, func=lambda x, y: a + b * x + c * y)
    rules = DEFAULT_RULES
    for cell in range(mesh.n_cells):
        pts = np.asarray(mesh.cell(cell).centroid) + rules.volume_points * [mesh.hx, mesh.hy]
        exact = a + b * pts[:, 0] + c * pts[:, 1]
        assert np.max(np.abs(evaluate_at(U, mesh, cell, pts) - exact)) < 1e-12 * max(1.0, abs(a) + abs(b) + abs(c)) * 10


def _per_side_rhs(law, mesh, U, rules):
    """Unlimited right-hand sides assembled side by side from the scalar kernels."""
    rhs = np.zeros_like(U)
    for cell in range(mesh.n_cells):
        for d, (_, _, _, length) in enumerate(edge_neighbors(mesh, cell)):
            rhs[cell] -= length * side_fluxes(law, mesh, U, cell, d, rules).F_H
        for k in (1, 2):
            rhs[cell, k] += volume_flux_integral(law, mesh, U, cell, k, rules)
    return rhs


@pytest.mark.parametrize("law", LAWS, ids=lambda l: l.name)
@pytest.mark.parametrize("mode", ["periodic", "ghost-constant"])
def test_vectorized_operator_matches_per_side_route(law, mode):
    mesh = build_uniform_mesh((0.0, 1.5, -0.5, 0.5), 5, 4, mode)
    U = _random_solution(mesh, law, 4)
    rules = gauss_rules(3, 3)
    data = Solver(mesh, law, parse_scheme("dg1"), rules).evaluate(U)
    ref = _per_side_rhs(law, mesh, U, rules)
    assert np.max(np.abs(data.rhs - ref)) < 1e-13
