"""
Buckley-Leverett with entropy fix and slope limiting
====================================================

The rational flux u^2 / (u^2 + (1 - u)^2) (1, 1 - 5 (1 - u)^2) is nonconvex.
With the square entropy fix alone the solution over- and undershoots; adding
the vertex-based slope limiter keeps it in [0, 1].
"""

from esdg import RunConfig, parse_scheme, run

n = 48            # h = 1/16 on (-1.5, 1.5)^2
dt = 4e-3         # under h / (4 * 3.4)
for name in ["dg1s", "es1", "es1s", "es3s", "es2fs"]:
    state = run(RunConfig(problem="buckley_leverett", scheme=parse_scheme(name), nx=n, ny=n, dt=dt, t_end=0.5))
    d = state.history[-1]
    print(f"{name:6s} t={d.t:.2f}  u_h in [{d.min:+.4f}, {d.max:.4f}]  mass={d.mass:.6f}")
