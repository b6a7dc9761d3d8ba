"""Qubit operator algebra for the three-site register A, B, C.

Single-qubit basis: index 0 is the excited level |e>, index 1 the ground
level |g>, so ``sigma_z = diag(1, -1)`` and ``sigma_minus = |g><e|``.
Composite index of |a b c> is ``4*a + 2*b + c`` (A slowest).
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import DimensionMismatch, InvalidState
from .numerics import dag, kron

E = 0
G = 1

_PAULI = {
    "id": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "plus": np.array([[0, 1], [0, 0]], dtype=complex),
    "minus": np.array([[0, 0], [1, 0]], dtype=complex),
}


class Site(Enum):
    A = 0
    B = 1
    C = 2


def pauli(kind: str) -> np.ndarray:
    """2x2 operator: one of x, y, z, plus, minus, id (fresh copy)."""
    try:
        return _PAULI[kind].copy()
    except KeyError:
        raise ValueError(f"unknown operator kind {kind!r}") from None


def ket(*levels: int) -> np.ndarray:
    """Product basis vector, e.g. ``ket(E, G, G)`` for |egg>."""
    v = np.zeros(2 ** len(levels), dtype=complex)
    idx = 0
    for lv in levels:
        idx = 2 * idx + lv
    v[idx] = 1.0
    return v


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def embed(op, site: Site | str) -> np.ndarray:
    """Lift a single-qubit operator to the 8-dimensional A x B x C space."""
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 operator, got {op.shape}")
    if isinstance(site, str):
        site = Site[site]
    factors = [np.eye(2, dtype=complex)] * 3
    factors[site.value] = op
    return kron(*factors)


def check_density_matrix(rho, dims: tuple[int, ...] = (4, 8), herm_tol: float = 1e-10,
                         trace_tol: float = 1e-10, pos_tol: float = 1e-9) -> np.ndarray:
    """Validate and return ``rho`` as a complex array; raises InvalidState."""
    r = np.asarray(rho, dtype=complex)
    if r.ndim != 2 or r.shape[0] != r.shape[1] or r.shape[0] not in dims:
        raise InvalidState(f"density matrix must be square of dimension {dims}, got {r.shape}")
    if not np.all(np.isfinite(r)):
        raise InvalidState("density matrix has non-finite entries")
    if np.linalg.norm(r - dag(r)) > herm_tol:
        raise InvalidState("density matrix is not Hermitian")
    if abs(np.trace(r) - 1.0) > trace_tol:
        raise InvalidState(f"trace {np.trace(r).real:.12g} differs from 1")
    lmin = np.linalg.eigvalsh((r + dag(r)) / 2)[0]
    if lmin < -pos_tol:
        raise InvalidState(f"negative eigenvalue {lmin:.3e}")
    return r


def partial_trace_C(rho) -> np.ndarray:
    """Reduce an 8x8 state of ABC to the 4x4 state of AB."""
    r = check_density_matrix(rho, dims=(8,))
    out = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        for k in range(4):
            out[i, k] = r[2 * i, 2 * k] + r[2 * i + 1, 2 * k + 1]
    return out


def partial_transpose_B(rho) -> np.ndarray:
    """Transpose the B indices of a 4x4 operator on A x B."""
    r = np.asarray(rho, dtype=complex)
    if r.shape != (4, 4):
        raise DimensionMismatch(f"expected 4x4, got {r.shape}")
    out = np.empty_like(r)
    for a in range(2):
        for b in range(2):
            for a2 in range(2):
                for b2 in range(2):
                    out[2 * a + b, 2 * a2 + b2] = r[2 * a + b2, 2 * a2 + b]
    return out


def vec(rho) -> np.ndarray:
    """Row-stacking vectorization: rows of ``rho`` appended one after another."""
    r = np.asarray(rho)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise DimensionMismatch(f"vec expects a square matrix, got {r.shape}")
    return r.reshape(-1).copy()


def unvec(v) -> np.ndarray:
    v = np.asarray(v)
    d = int(round(np.sqrt(v.size)))
    if v.ndim != 1 or d * d != v.size:
        raise DimensionMismatch(f"length {v.size} is not a perfect square")
    return v.reshape(d, d).copy()


def trace_distance(rho, sigma) -> float:
    diff = np.asarray(rho) - np.asarray(sigma)
    w = np.linalg.eigvalsh((diff + dag(diff)) / 2)
    return 0.5 * float(np.sum(np.abs(w)))
