"""Steady-state entanglement of two decaying qubits coupled to a dissipative ancilla."""

from .entanglement import negativity, optimal_two_qubit_coupling, two_qubit_analytic
from .model import ModelParams, apply_liouvillian, build_hamiltonian, build_liouvillian
from .steady import SteadyStateResult, steady_negativity, steady_state

__version__ = "0.1.0"

__all__ = [
    "ModelParams",
    "SteadyStateResult",
    "apply_liouvillian",
    "build_hamiltonian",
    "build_liouvillian",
    "negativity",
    "optimal_two_qubit_coupling",
    "steady_negativity",
    "steady_state",
    "two_qubit_analytic",
    "__version__",
]
