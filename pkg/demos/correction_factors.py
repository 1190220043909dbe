"""
Correction factors on a single side
===================================

For one pair of neighbouring cells the low-order LLF flux F_L is blended with
a high-order flux F_H. The three entropy bounds give increasingly dissipative
factors, and the bound-preserving factor clips F_H - F_L so that both
flux-corrected bar states stay inside the local bounds.
"""

import numpy as np

from esdg import kpp_problem, max_wave_speed
from esdg.dg import llf_flux
from esdg.limiters import alpha_bp, alpha_es, bounded_bar_state, limiter_inputs, nu_ij, q_bound

law = kpp_problem()
n = (1.0, 0.0)
ui, uj = np.array([1.0, 3.0, 8.0]), np.array([9.0, 2.5, 8.0])
lam = max_wave_speed(law, ui, uj, n)
FL = llf_flux(law, ui, uj, n, lam)
FH = FL + np.array([2.0, -0.5, 0.0])

# local bounds always contain both averages
lo, hi = np.minimum(ui, uj) - 0.2, np.maximum(ui, uj) + 0.2
inp = limiter_inputs(law, ui, uj, FL, FH, lam, n, (lo, hi), (lo, hi))
print("P_ij      ", (inp.v_j - inp.v_i) * (FH - FL))
for v in (1, 2, 3):
    print(f"Q^ES{v}    ", q_bound(inp, v), "  alpha^ES", alpha_es(inp, v))
print("nu_ij     ", nu_ij(inp))

a = alpha_bp(inp)
print("alpha^BP  ", a)
print("bar state ", inp.bar)
print("corrected ", bounded_bar_state(inp, a), "and", inp.bar + a * (FH - FL) / lam)
print("bounds    ", lo, hi)
