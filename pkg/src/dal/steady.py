"""Unique steady state of the Liouvillian via its null vector."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entanglement import negativity
from .errors import ConvergenceFailure, NonUniqueSteadyState, NotPositive, ZeroTrace
from .model import ModelParams, build_liouvillian
from .numerics import dag, min_singular_vector
from .quantum import partial_trace_C, unvec, vec


@dataclass(frozen=True)
class Tolerances:
    residual: float = 1e-9
    gap: float = 1e-6
    positivity: float = 1e-9
    trace: float = 1e-8


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class SteadyStateResult:
    rho_st: np.ndarray
    residual: float
    nullspace_gap: float
    min_eigenvalue: float


def steady_state(p: ModelParams, tol: Tolerances = DEFAULT_TOL) -> SteadyStateResult:
    """Solve L[rho] = 0 through the smallest right singular vector of L.

    The singular vector is reshaped, made Hermitian and normalised to unit
    trace.  Positivity is checked, never enforced.
    """
    if p.gamma <= 0 or p.gamma_c <= 0:
        raise NonUniqueSteadyState("all decay rates must be positive for a unique steady state")
    m = build_liouvillian(p)
    v, _, gap = min_singular_vector(m)
    if gap < tol.gap:
        raise NonUniqueSteadyState(f"second singular value {gap:.3e} below {tol.gap:.1e}")
    rho = unvec(v)
    rho = (rho + dag(rho)) / 2
    tr = np.trace(rho).real
    if abs(tr) < tol.trace:
        raise ZeroTrace(f"null vector has trace {tr:.3e}")
    rho = rho / tr
    residual = float(np.linalg.norm(m @ vec(rho)))
    if residual > tol.residual:
        raise ConvergenceFailure(f"steady-state residual {residual:.3e} above {tol.residual:.1e}")
    lmin = float(np.linalg.eigvalsh(rho)[0])
    if lmin < -tol.positivity:
        raise NotPositive(f"steady state has eigenvalue {lmin:.3e}")
    return SteadyStateResult(rho, residual, gap, lmin)


def steady_negativity(p: ModelParams, tol: Tolerances = DEFAULT_TOL) -> float:
    """Negativity of the AB reduction of the steady state."""
    return negativity(partial_trace_C(steady_state(p, tol).rho_st))
