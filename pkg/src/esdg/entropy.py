"""Rusanov-type entropy viscosity for the Taylor-basis DG-P1 scheme."""

from __future__ import annotations

import numpy as np

from .dg import mass_diagonal

#: D_i below this multiple of the cell area counts as zero
DISSIPATION_FLOOR = 1e-14


class UnsupportedConfiguration(ValueError):
    """Raised for entropy choices the solver does not implement."""


def _require_square(law) -> None:
    if law.entropy_kind != "square":
        raise UnsupportedConfiguration(
            f"entropy production is implemented for the square entropy only, got {law.entropy_kind!r}"
        )


def entropy_coeffs(law, solution: np.ndarray) -> np.ndarray:
    """Taylor coefficients ``(v_i0, v_i1, v_i2)`` of the linearized entropy variable.

    Works on one cell (shape ``(3,)``) or many (``(n, 3)``).
    """
    U = np.asarray(solution, dtype=float)
    out = np.empty_like(U)
    out[..., 0] = law.entropy_prime(U[..., 0])
    out[..., 1:] = law.entropy_second(U[..., 0])[..., None] * U[..., 1:]
    return out


def dissipation(hx: float, hy: float, coeffs: np.ndarray):
    """Diagonal Rusanov form ``D_i = m_11 v_i1^2 + m_22 v_i2^2``."""
    _, m11, m22 = mass_diagonal(hx, hy)
    c = np.asarray(coeffs, dtype=float)
    return m11 * c[..., 1] ** 2 + m22 * c[..., 2] ** 2


def interface_entropy_flux(v_i, v_j, F0, psi_i_n, psi_j_n):
    """``G_ij = (v_i + v_j) F_ij,0 / 2 - (psi_i + psi_j) . n_ij / 2``."""
    return 0.5 * (v_j + v_i) * F0 - 0.5 * (psi_j_n + psi_i_n)


def entropy_production(law, coeffs: np.ndarray, rhs: np.ndarray):
    """Cell entropy production ``P_i`` from the right-hand sides of the moment equations.

    ``rhs[..., k] = -sum_j |S_ij| F_ij,k + int grad(phi_ik) . f(u_ih)`` (zero volume
    term for ``k = 0``). Because ``grad v_ih`` is constant on a P1 cell,
    ``P_i = sum_k v_ik rhs_k``.
    """
    _require_square(law)
    return np.sum(np.asarray(coeffs) * np.asarray(rhs), axis=-1)


def entropy_viscosity(P, G_sum, D, area: float = 1.0):
    """``nu_i = max(0, P_i + sum_j |S_ij| G_ij) / D_i``, zero where ``D_i`` is negligible."""
    P = np.asarray(P, dtype=float)
    D = np.asarray(D, dtype=float)
    active = D > DISSIPATION_FLOOR * area
    excess = np.maximum(0.0, P + G_sum)
    return np.where(active, excess / np.where(active, D, 1.0), 0.0)
