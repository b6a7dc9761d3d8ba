"""Hamiltonian eigenbasis: fidelities, truncated mixtures, eigenstate entanglement.

Eigenstates are labelled by ascending energy, so index 0 is the ground
state.  Labels at different parameter points are not matched to each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entanglement import negativity
from .errors import EmptySelection
from .model import ModelParams, build_hamiltonian
from .numerics import eigh
from .quantum import check_density_matrix, partial_trace_C, projector

DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class Spectrum:
    energies: np.ndarray
    states: np.ndarray  # column n is |E_n>
    degeneracy_flags: np.ndarray  # flag k: E_{k+1} - E_k < DEGENERACY_TOL

    def state(self, n: int) -> np.ndarray:
        return self.states[:, _check_index(n)]

    def degenerate_blocks(self) -> list[list[int]]:
        """Indices grouped into (near-)degenerate subspaces."""
        blocks = [[0]]
        for k, flag in enumerate(self.degeneracy_flags):
            if flag:
                blocks[-1].append(k + 1)
            else:
                blocks.append([k + 1])
        return blocks


def _check_index(n: int) -> int:
    if not 0 <= n < 8:
        raise IndexError(f"eigenstate index {n} outside 0..7")
    return int(n)


def hamiltonian_spectrum(p: ModelParams) -> Spectrum:
    res = eigh(build_hamiltonian(p))
    flags = np.diff(res.eigenvalues) < DEGENERACY_TOL
    return Spectrum(res.eigenvalues, res.eigenvectors, flags)


def fidelities(rho, s: Spectrum) -> np.ndarray:
    """Populations <E_n|rho|E_n> for n = 0..7."""
    r = check_density_matrix(rho, dims=(8,))
    f = np.einsum("in,ij,jn->n", s.states.conj(), r, s.states)
    return f.real


def subspace_fidelities(f: np.ndarray, s: Spectrum) -> list[tuple[list[int], float]]:
    """Fidelities summed over each degenerate block; basis independent."""
    return [(block, float(np.sum(f[block]))) for block in s.degenerate_blocks()]


@dataclass(frozen=True)
class TruncatedMixture:
    rho: np.ndarray
    kept_weight: float

    @property
    def discarded_weight(self) -> float:
        return 1.0 - self.kept_weight


def truncated_mixture(s: Spectrum, f, indices) -> TruncatedMixture:
    """sum_{n in indices} F_n |E_n><E_n|, renormalised to unit trace."""
    idx = sorted({_check_index(n) for n in indices})
    f = np.asarray(f, dtype=float)
    weight = float(sum(f[n] for n in idx))
    if not idx or weight <= 0:
        raise EmptySelection("selected eigenstates carry no weight")
    rho = sum(f[n] * projector(s.states[:, n]) for n in idx) / weight
    return TruncatedMixture(rho, weight)


def eigenstate_negativity(s: Spectrum, n: int) -> float:
    return negativity(partial_trace_C(projector(s.state(n))))
