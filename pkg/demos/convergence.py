"""
Convergence on smooth linear transport
======================================

sin(2 pi x) sin(2 pi y) advected once around the periodic unit square.
DG-P1 converges at second order, DG-P0 at first order at best.
"""

import numpy as np

from esdg import RunConfig, l1_error, linear_advection_problem, parse_scheme, run

law = linear_advection_problem()
for name in ["dg0", "dg1"]:
    errs = []
    for n in (16, 32, 64):
        state = run(RunConfig(problem="advection", scheme=parse_scheme(name), nx=n, ny=n, dt=0.1 / n, t_end=1.0))
        errs.append(l1_error(state.solution, state.solver.mesh, law.initial_condition))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    print(name, "L1 errors", np.round(errs, 6), "orders", np.round(orders, 3))
