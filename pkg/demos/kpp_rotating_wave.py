"""
KPP rotating wave: unlimited vs limited schemes
===============================================

The nonconvex flux f(u) = (sin u, cos u) turns a discontinuous disc into a
rotating composite wave. The unlimited DG-P1 target leaves [pi/4, 14 pi/4];
flux limiting plus vertex-based slope limiting keeps every vertex value inside.
A coarse mesh keeps this to well under a minute.
"""

import numpy as np

from esdg import RunConfig, parse_scheme, run

lo, hi = np.pi / 4, 14 * np.pi / 4
n, dt, t_end = 64, 4e-3, 0.5

for name in ["dg0", "dg1", "dg1fs", "es1fs", "es2fs", "es3fs"]:
    cfg = RunConfig(problem="kpp", scheme=parse_scheme(name), nx=n, ny=n, dt=dt, t_end=t_end)
    state = run(cfg)
    d = state.history[-1]
    inside = lo - 1e-9 <= d.min and d.max <= hi + 1e-9
    print(f"{name:6s} u_h in [{d.min:8.4f}, {d.max:8.4f}]  inside invariant set: {inside}")
