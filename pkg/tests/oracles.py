"""Independent reference computations used only by the tests."""

import numpy as np


def rk4_propagate(m, v0, t, h):
    """Classical fixed-step Runge-Kutta for dv/dt = m v."""
    v = np.array(v0, dtype=complex)
    n = int(round(t / h))
    for _ in range(n):
        k1 = m @ v
        k2 = m @ (v + 0.5 * h * k1)
        k3 = m @ (v + 0.5 * h * k2)
        k4 = m @ (v + h * k3)
        v = v + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return v


def steady_by_trace_replacement(m):
    """Null vector of the Liouvillian by replacing one equation with tr(rho) = 1."""
    d = int(round(np.sqrt(m.shape[0])))
    a = np.array(m, dtype=complex)
    b = np.zeros(d * d, dtype=complex)
    a[0, :] = 0
    a[0, [i * d + i for i in range(d)]] = 1.0
    b[0] = 1.0
    return np.linalg.solve(a, b).reshape(d, d)


def partial_trace_last(rho, dims, keep):
    """Partial trace via reshape/einsum, for cross-checking the index loops."""
    n = len(dims)
    t = np.asarray(rho).reshape(dims + dims)
    letters = "abcdefghijkl"
    ins = list(letters[:n]) + list(letters[n:2 * n])
    for k in range(n):
        if k not in keep:
            ins[n + k] = ins[k]
    out = [ins[k] for k in keep] + [ins[n + k] for k in keep]
    r = np.einsum("".join(ins) + "->" + "".join(out), t)
    d = int(np.prod([dims[k] for k in keep]))
    return r.reshape(d, d)
