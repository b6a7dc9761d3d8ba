"""Dense complex matrix kernel.

Everything here works on plain ``numpy`` arrays in C (row-major) order.
Eigendecomposition and SVD are delegated to LAPACK through numpy; this
module adds the input checks, the phase convention and the diagnostics
(residual, gap) the rest of the package relies on.  The matrix exponential
is a scaling-and-squaring Padé implementation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, ExpmOverflow, NotHermitian

HERMITIAN_RTOL = 1e-12


def _as_square(m, name: str = "matrix") -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def dag(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def kron(*ops) -> np.ndarray:
    """Kronecker product of any number of operators, left factor slowest."""
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    v = np.array(v, dtype=complex)
    cols = v if v.ndim == 2 else v[:, None]
    idx = np.argmax(np.abs(cols), axis=0)
    pivots = cols[idx, np.arange(cols.shape[1])]
    mags = np.abs(pivots)
    phases = np.where(mags > 0, pivots / np.where(mags > 0, mags, 1.0), 1.0)
    cols = cols / phases
    # exact real pivot, not just approximately
    cols[idx, np.arange(cols.shape[1])] = mags
    return cols if v.ndim == 2 else cols[:, 0]


@dataclass(frozen=True)
class EighResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eigh(h, rtol: float = HERMITIAN_RTOL) -> EighResult:
    """Hermitian eigendecomposition with ascending eigenvalues.

    Raises NotHermitian when ``||h - h^H||_F > rtol * ||h||_F``.
    """
    a = _as_square(h, "h")
    scale = np.linalg.norm(a)
    if np.linalg.norm(a - dag(a)) > rtol * max(scale, np.finfo(float).tiny):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    try:
        w, v = np.linalg.eigh((a + dag(a)) / 2)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return EighResult(w, fix_phase(v))


def min_singular_vector(m) -> tuple[np.ndarray, float, float]:
    """Right singular vector of the smallest singular value.

    Returns ``(v, residual, gap)`` with ``residual = ||m v||`` and ``gap`` the
    second-smallest singular value (0 for a 1x1 input).
    """
    a = _as_square(m, "m")
    try:
        _, s, vh = np.linalg.svd(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    v = fix_phase(np.conj(vh[-1]))
    residual = float(np.linalg.norm(a @ v))
    gap = float(s[-2]) if s.size > 1 else 0.0
    return v, residual, gap


# Padé coefficients and backward-error thresholds (Higham 2005, double precision)
_PADE = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0, 960960.0,
         16380.0, 182.0, 1.0),
}
_THETA = {3: 1.495585217958292e-2, 5: 2.539398330063230e-1,
          7: 9.504178996162932e-1, 9: 2.097847961257068e0, 13: 5.371920351148152e0}
_MAX_SQUARINGS = 1024


def _pade_uv(a: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    b = _PADE[m]
    ident = np.eye(a.shape[0], dtype=a.dtype)
    a2 = a @ a
    if m < 13:
        powers = [ident, a2]
        while len(powers) < (m + 1) // 2:
            powers.append(powers[-1] @ a2)
        u = a @ sum(b[2 * k + 1] * p for k, p in enumerate(powers))
        v = sum(b[2 * k] * p for k, p in enumerate(powers))
        return u, v
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    return u, v


def expm(m) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a diagonal Padé approximant."""
    a = _as_square(m, "m")
    with np.errstate(over="ignore"):
        norm1 = float(np.linalg.norm(a, 1))
    if not np.isfinite(norm1):
        raise ExpmOverflow("matrix norm is not finite")
    s = 0
    for deg in (3, 5, 7, 9):
        if norm1 <= _THETA[deg]:
            u, v = _pade_uv(a, deg)
            break
    else:
        deg = 13
        if norm1 > _THETA[13]:
            s = int(np.ceil(np.log2(norm1 / _THETA[13])))
        if s > _MAX_SQUARINGS:
            raise ExpmOverflow(f"norm {norm1:.3e} needs {s} squarings")
        u, v = _pade_uv(a / 2.0**s, 13)
    try:
        r = np.linalg.solve(v - u, v + u)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure("singular Padé denominator") from exc
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(s):
            r = r @ r
            if not np.all(np.isfinite(r)):
                break
    if not np.all(np.isfinite(r)):
        raise ExpmOverflow(f"exponential of a matrix with norm {norm1:.3e} overflows")
    return r
