"""Hamiltonian, dissipator and Liouvillian of the A-B-C qubit model.

Units: every frequency, coupling and rate is measured in units of the
A/B transition frequency, and hbar = 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .errors import ConfigError
from .numerics import dag, kron
from .quantum import Site, embed, pauli

_I8 = np.eye(8, dtype=complex)


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters in dimensionless units (omega of A and B is 1)."""

    omega_c: float = 0.0
    j: float = 0.0
    j_c: float = 0.0
    gamma: float = 1e-3
    gamma_c: float = 1e-3

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"{f.name} must be a real number, got {v!r}")
            if not math.isfinite(v):
                raise ConfigError(f"{f.name} must be finite")
            object.__setattr__(self, f.name, float(v))
        if self.gamma < 0 or self.gamma_c < 0:
            raise ConfigError("decay rates must be non-negative")

    @property
    def omega(self) -> float:
        return 1.0

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        if not isinstance(d, dict):
            raise ConfigError("model parameters must be a JSON object")
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown parameter keys: {sorted(extra)}")
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON: {exc}") from exc
        return cls.from_dict(d)


def _sx(site):
    return embed(pauli("x"), site)


def build_hamiltonian(p: ModelParams) -> np.ndarray:
    sz = pauli("z")
    h = 0.5 * p.omega * (embed(sz, Site.A) + embed(sz, Site.B)) + 0.5 * p.omega_c * embed(sz, Site.C)
    h = h + p.j * _sx(Site.A) @ _sx(Site.B)
    h = h + p.j_c * (_sx(Site.A) @ _sx(Site.C) + _sx(Site.B) @ _sx(Site.C))
    return h


def decay_channels(p: ModelParams) -> list[tuple[float, np.ndarray]]:
    """(rate, lowering operator) for each site."""
    sm = pauli("minus")
    return [(p.gamma, embed(sm, Site.A)), (p.gamma, embed(sm, Site.B)), (p.gamma_c, embed(sm, Site.C))]


def build_liouvillian(p: ModelParams) -> np.ndarray:
    """64x64 generator acting on row-stacked density matrices.

    Uses vec(A rho B) = (A kron B^T) vec(rho).
    """
    h = build_hamiltonian(p)
    m = -1j * (kron(h, _I8) - kron(_I8, h.T))
    for rate, op in decay_channels(p):
        if rate == 0.0:
            continue
        n = dag(op) @ op
        m = m + rate * (kron(op, op.conj()) - 0.5 * kron(n, _I8) - 0.5 * kron(_I8, n.T))
    return m


def apply_liouvillian(p: ModelParams, rho) -> np.ndarray:
    """-i[H, rho] + dissipator(rho), by direct matrix products."""
    rho = np.asarray(rho, dtype=complex)
    h = build_hamiltonian(p)
    out = -1j * (h @ rho - rho @ h)
    for rate, op in decay_channels(p):
        n = dag(op) @ op
        out = out + rate * (op @ rho @ dag(op) - 0.5 * (n @ rho + rho @ n))
    return out
