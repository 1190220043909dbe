"""Scalar conservation laws with a square entropy pair.

Every law exposes vectorized flux components so the solver only evaluates
the component it needs on a given side orientation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

Array = np.ndarray
ScalarFn = Callable[[Array], Array]

#: omega-grid and safety factor used when a law carries no speed bound
SAMPLE_POINTS = 35
SAMPLE_SAFETY = 1.01


@dataclass(frozen=True)
class ConservationLaw:
    name: str
    fx: ScalarFn
    fy: ScalarFn
    dfx: ScalarFn
    dfy: ScalarFn
    qx: ScalarFn
    qy: ScalarFn
    initial_condition: Callable[[Array, Array], Array]
    invariant_bounds: tuple[float, float]
    # scalar bound, per-axis pair, or None to sample f' along the state segment
    gms: Union[float, tuple[float, float], None] = None
    background: float = 0.0
    default_domain: tuple[float, float, float, float] = (0.0, 1.0, 0.0, 1.0)
    default_boundary: str = "ghost-constant"
    entropy_kind: str = "square"
    exact_solution: Optional[Callable[[Array, Array, float], Array]] = field(default=None, compare=False)

    # square entropy eta = u^2/2
    @staticmethod
    def entropy(u):
        return 0.5 * np.asarray(u) ** 2

    @staticmethod
    def entropy_prime(u):
        return np.asarray(u, dtype=float)

    @staticmethod
    def entropy_second(u):
        return np.ones_like(np.asarray(u, dtype=float))

    def flux(self, u) -> Array:
        """Stacked flux, shape ``u.shape + (2,)``."""
        return np.stack([self.fx(u), self.fy(u)], axis=-1)

    def flux_derivative(self, u) -> Array:
        return np.stack([self.dfx(u), self.dfy(u)], axis=-1)

    def entropy_flux(self, u) -> Array:
        return np.stack([self.qx(u), self.qy(u)], axis=-1)

    def flux_component(self, u, axis: int) -> Array:
        return self.fx(u) if axis == 0 else self.fy(u)

    def potential(self, u) -> Array:
        """Entropy potential ``psi(u) = v(u) f(u) - q(u)``."""
        u = np.asarray(u, dtype=float)
        v = self.entropy_prime(u)[..., None]
        return v * self.flux(u) - self.entropy_flux(u)

    def potential_component(self, u, axis: int) -> Array:
        u = np.asarray(u, dtype=float)
        q = self.qx(u) if axis == 0 else self.qy(u)
        return self.entropy_prime(u) * self.flux_component(u, axis) - q


def _kpp_ic(x, y):
    return np.where(x**2 + y**2 <= 1.0, 14.0 * np.pi / 4.0, np.pi / 4.0)


def kpp_problem() -> ConservationLaw:
    """KPP rotating wave, ``f(u) = (sin u, cos u)`` on (-2, 2) x (-2.5, 1.5)."""
    return ConservationLaw(
        name="kpp",
        fx=np.sin,
        fy=np.cos,
        dfx=np.cos,
        dfy=lambda u: -np.sin(u),
        qx=lambda u: u * np.sin(u) + np.cos(u),
        qy=lambda u: u * np.cos(u) - np.sin(u),
        initial_condition=_kpp_ic,
        invariant_bounds=(np.pi / 4.0, 14.0 * np.pi / 4.0),
        gms=1.0,
        background=np.pi / 4.0,
        default_domain=(-2.0, 2.0, -2.5, 1.5),
    )


def _bl_frac(u):
    return u**2 / (u**2 + (1.0 - u) ** 2)


def _bl_dfrac(u):
    d = u**2 + (1.0 - u) ** 2
    return 2.0 * u * (1.0 - u) / d**2


def _bl_fy(u):
    return _bl_frac(u) * (1.0 - 5.0 * (1.0 - u) ** 2)


def _bl_dfy(u):
    return _bl_dfrac(u) * (1.0 - 5.0 * (1.0 - u) ** 2) + _bl_frac(u) * 10.0 * (1.0 - u)


def _bl_qx(u):
    d = 2.0 * u**2 - 2.0 * u + 1.0
    return 0.25 * (2.0 * (u - 1.0) / d - np.log(d))


def _bl_qy(u):
    d = 2.0 * u**2 - 2.0 * u + 1.0
    return (
        -20.0 * u**3
        + 15.0 * u**2
        - (9.0 * u + 6.0) / d
        - 3.0 * np.log(d)
        - 15.0 * np.arctan(1.0 - 2.0 * u)
    ) / 12.0


def _bl_ic(x, y):
    return np.where(x**2 + y**2 < 0.5, 1.0, 0.0)


def buckley_leverett_problem() -> ConservationLaw:
    """Two-dimensional Buckley-Leverett equation with gravity, on (-1.5, 1.5)^2."""
    return ConservationLaw(
        name="buckley_leverett",
        fx=_bl_frac,
        fy=_bl_fy,
        dfx=_bl_dfrac,
        dfy=_bl_dfy,
        qx=_bl_qx,
        qy=_bl_qy,
        initial_condition=_bl_ic,
        invariant_bounds=(0.0, 1.0),
        gms=3.4,
        background=0.0,
        default_domain=(-1.5, 1.5, -1.5, 1.5),
    )


def linear_advection_problem(a: Sequence[float] = (1.0, 1.0)) -> ConservationLaw:
    """Linear transport ``f(u) = a u`` of ``sin(2 pi x) sin(2 pi y)``, periodic on the unit square."""
    ax, ay = (float(c) for c in a)
    if ax == 0.0 and ay == 0.0:
        raise ValueError("advection velocity must be nonzero")

    def u0(x, y):
        return np.sin(2.0 * np.pi * x) * np.sin(2.0 * np.pi * y)

    def exact(x, y, t):
        return u0(np.mod(x - ax * t, 1.0), np.mod(y - ay * t, 1.0))

    return ConservationLaw(
        name="advection",
        fx=lambda u: ax * np.asarray(u, dtype=float),
        fy=lambda u: ay * np.asarray(u, dtype=float),
        dfx=lambda u: np.full_like(np.asarray(u, dtype=float), ax),
        dfy=lambda u: np.full_like(np.asarray(u, dtype=float), ay),
        qx=lambda u: 0.5 * ax * np.asarray(u, dtype=float) ** 2,
        qy=lambda u: 0.5 * ay * np.asarray(u, dtype=float) ** 2,
        initial_condition=u0,
        invariant_bounds=(-1.0, 1.0),
        gms=(abs(ax), abs(ay)),
        background=0.0,
        default_domain=(0.0, 1.0, 0.0, 1.0),
        default_boundary="periodic",
        exact_solution=exact,
    )


PROBLEMS = {
    "kpp": kpp_problem,
    "buckley_leverett": buckley_leverett_problem,
    "advection": linear_advection_problem,
}


def get_problem(name: str) -> ConservationLaw:
    try:
        return PROBLEMS[name]()
    except KeyError:
        raise ValueError(f"unknown problem {name!r}, expected one of {sorted(PROBLEMS)}") from None


def max_wave_speed(law: ConservationLaw, uL, uR, n) -> Array:
    """Upper bound on ``|f'(w uL + (1 - w) uR) . n|`` for ``w`` in [0, 1].

    Vectorized over ``uL``/``uR``; ``n`` is one 2-vector shared by all states.
    """
    nx_, ny_ = float(n[0]), float(n[1])
    uL = np.asarray(uL, dtype=float)
    uR = np.asarray(uR, dtype=float)
    shape = np.broadcast(uL, uR).shape
    if law.gms is not None:
        if np.ndim(law.gms) == 0:
            lam = float(law.gms)
        else:
            lam = abs(nx_) * law.gms[0] + abs(ny_) * law.gms[1]
        return np.full(shape, lam)
    w = np.linspace(0.0, 1.0, SAMPLE_POINTS).reshape((-1,) + (1,) * len(shape))
    states = w * uL + (1.0 - w) * uR
    speeds = np.abs(law.dfx(states) * nx_ + law.dfy(states) * ny_)
    return SAMPLE_SAFETY * speeds.max(axis=0)
