"""Two-qubit negativity and the closed-form result for an uncoupled pair."""

from __future__ import annotations

import math

import numpy as np

from .quantum import check_density_matrix, partial_transpose_B

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def negativity(rho_ab) -> float:
    """Sum of the negative parts of the partial-transpose spectrum of a 4x4 state.

    For unit-trace Hermitian input this equals (||rho^T_B||_1 - 1) / 2.
    """
    r = check_density_matrix(rho_ab, dims=(4,))
    pt = partial_transpose_B(r)
    w = np.linalg.eigvalsh((pt + pt.conj().T) / 2)
    return float(-np.sum(w[w < 0.0]))


def two_qubit_analytic(j: float, gamma: float) -> float:
    """Steady-state negativity of two decaying qubits coupled by j * sx sx."""
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    j2 = j * j
    value = (math.sqrt(j2 * gamma * gamma + 4.0 * j2) - j2) / (4.0 * j2 + 4.0 + gamma * gamma)
    return max(0.0, value)


def golden_section_max(f, lo: float, hi: float, xtol: float = 1e-6) -> float:
    """Argmax of a unimodal function on [lo, hi]."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (a + b) / 2


def optimal_two_qubit_coupling(gamma: float, xtol: float = 1e-6) -> tuple[float, float]:
    """Coupling j in (0, 2] that maximises :func:`two_qubit_analytic`.

    At gamma = 0 the stationarity condition is j**2 + j - 1 = 0 and the root
    is returned in closed form.
    """
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    if gamma == 0:
        j_star = _INV_PHI
    else:
        j_star = golden_section_max(lambda j: two_qubit_analytic(j, gamma), 0.0, 2.0, xtol)
    return j_star, two_qubit_analytic(j_star, gamma)
