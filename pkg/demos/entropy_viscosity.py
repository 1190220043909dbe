"""
Cell entropy balance with the entropy viscosity
===============================================

For the square entropy the rate of change of cell entropy is
P_i - nu_i D_i. The viscosity nu_i is the smallest value that keeps
P_i + sum |S_ij| G_ij non-positive, so the scaled residual printed below
stays at round-off while the unlimited target produces entropy.
"""

import numpy as np

from esdg import RunConfig, parse_scheme
from esdg.stepper import initial_state

for name in ["dg1", "es1", "es3"]:
    state = initial_state(RunConfig(problem="kpp", scheme=parse_scheme(name), nx=48, ny=48, dt=1e-3, t_end=0.0))
    data = state.solver.evaluate(state.solution)
    active = np.count_nonzero(data.nu)
    print(f"{name}: max scaled residual {data.scaled_entropy_residual.max():+.3e}, "
          f"cells with nu > 0: {active}, max nu {data.nu.max():.3f}")
