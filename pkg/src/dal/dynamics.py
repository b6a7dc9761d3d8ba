"""Time evolution of the master equation with an exact one-step propagator.

The generator is time independent, so rho(t + h) = expm(L h) rho(t) in
vectorized form.  Stiffness (O(1) frequencies against O(1e-3) decay) is a
non-issue for this approach.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidState, NotConverged
from .model import ModelParams, build_liouvillian
from .numerics import dag, expm
from .quantum import E, G, check_density_matrix, ket, projector, trace_distance, unvec, vec
from .spectral import fidelities, hamiltonian_spectrum
from .steady import steady_state

TRACE_TOL = 1e-9
HERM_TOL = 1e-9
POS_TOL = 1e-8


def initial_state() -> np.ndarray:
    """|e><e|_A x |g><g|_B x |g><g|_C."""
    return projector(ket(E, G, G))


def linear_times(t_max: float, dt_out: float) -> np.ndarray:
    if not t_max > 0 or not 0 < dt_out <= t_max:
        raise ValueError("need t_max > 0 and 0 < dt_out <= t_max")
    n = int(math.floor(t_max / dt_out + 1e-9))
    return dt_out * np.arange(n + 1)


def log_times(t_min: float, t_max: float, num: int) -> np.ndarray:
    """t = 0 followed by ``num`` log-spaced samples in [t_min, t_max]."""
    if not 0 < t_min < t_max or num < 2:
        raise ValueError("need 0 < t_min < t_max and num >= 2")
    return np.concatenate([[0.0], np.geomspace(t_min, t_max, num)])


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n_samples, 8, 8)
    trace_errors: np.ndarray
    min_eigs: np.ndarray
    fidelity_rows: np.ndarray | None = None  # (n_samples, 8)

    def write_csv(self, path) -> None:
        if self.fidelity_rows is None:
            raise ValueError("trajectory has no fidelity rows")
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t"] + [f"F_{n}" for n in range(8)] + ["trace_error", "min_eig"])
            for t, f, te, me in zip(self.times, self.fidelity_rows, self.trace_errors, self.min_eigs):
                w.writerow([repr(float(t))] + [repr(float(x)) for x in f] + [repr(float(te)), repr(float(me))])


def _sample_checks(rho: np.ndarray, t: float) -> tuple[float, float]:
    trace_err = abs(np.trace(rho) - 1.0)
    herm_err = np.linalg.norm(rho - dag(rho))
    lmin = float(np.linalg.eigvalsh((rho + dag(rho)) / 2)[0])
    if trace_err > TRACE_TOL or herm_err > HERM_TOL or lmin < -POS_TOL:
        raise InvalidState(
            f"state at t={t:g} left the physical set "
            f"(trace error {trace_err:.2e}, hermiticity {herm_err:.2e}, min eig {lmin:.2e})")
    return float(trace_err), lmin


def propagate_times(p: ModelParams, rho0, times) -> Trajectory:
    """States at the given ascending times; ``times[0]`` is the time of ``rho0``."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be a non-empty strictly ascending vector")
    rho0 = check_density_matrix(rho0, dims=(8,))
    m = build_liouvillian(p)
    cache: dict[float, np.ndarray] = {}
    states = np.empty((times.size, 8, 8), dtype=complex)
    trace_errors = np.empty(times.size)
    min_eigs = np.empty(times.size)
    v = vec(rho0)
    for k, t in enumerate(times):
        if k:
            h = float(t - times[k - 1])
            prop = cache.get(h)
            if prop is None:
                prop = cache[h] = expm(m * h)
            v = prop @ v
        rho = unvec(v)
        trace_errors[k], min_eigs[k] = _sample_checks(rho, t)
        states[k] = rho
    return Trajectory(times, states, trace_errors, min_eigs)


def propagate(p: ModelParams, rho0, t_max: float, dt_out: float) -> Trajectory:
    return propagate_times(p, rho0, linear_times(t_max, dt_out))


def fidelity_trajectory(p: ModelParams, rho0, times) -> Trajectory:
    """Trajectory with populations of the Hamiltonian eigenstates at every sample."""
    traj = propagate_times(p, rho0, times)
    s = hamiltonian_spectrum(p)
    traj.fidelity_rows = np.array([fidelities(_hermitize(r), s) for r in traj.states])
    return traj


def _hermitize(r: np.ndarray) -> np.ndarray:
    return (r + dag(r)) / 2


def default_t_cap(p: ModelParams) -> float:
    return 50.0 / min(p.gamma, p.gamma_c)


def converge_to_steady(p: ModelParams, rho0, tol: float, t_cap: float | None = None,
                       dt_out: float = 1.0) -> tuple[float, np.ndarray]:
    """First sample time at which the trace distance to the steady state is <= tol."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    if t_cap is None:
        t_cap = default_t_cap(p)
    target = steady_state(p).rho_st
    rho = check_density_matrix(rho0, dims=(8,))
    prop = expm(build_liouvillian(p) * dt_out)
    v = vec(rho)
    t = 0.0
    k = 0
    while True:
        dist = trace_distance(rho, target)
        if dist <= tol:
            return t, rho
        if t + dt_out > t_cap * (1 + 1e-12):
            raise NotConverged(t_cap, dist)
        v = prop @ v
        k += 1
        t = k * dt_out
        rho = unvec(v)
