"""Hot loops with a numba path and a plain numpy path.

Set QDVOLUME_NUMBA=0 to force the numpy path.  Both paths compute the same
expressions in the same order.
"""
import os

import numpy as np


def _numpy_line(x, phi, gamma):
    a = np.exp((-1j * phi - gamma - np.pi) * x)
    b = np.exp((1j * phi - gamma - np.pi) * x)
    den = x * (-np.expm1(-2.0 * gamma * x)) * (-np.expm1(-2.0 * np.pi * x))
    return (a - b) / den


def _numpy_arc(theta, r, phi, gamma):
    x = r * np.exp(1j * theta)
    return 1j * np.exp(-1j * phi * x) / (4.0 * np.sinh(gamma * x) * np.sinh(np.pi * x))


def _numpy_grad_hess(A, c, s, M, b, v):
    e = np.exp(A @ v + c)
    one_m = 1.0 - e
    g = A.T @ (-s * np.log(one_m)) + M @ v + b
    w = s * e / one_m
    H = (A.T * w) @ A + M
    return g, H


def _numpy_grad(A, c, s, M, b, v):
    e = np.exp(A @ v + c)
    return A.T @ (-s * np.log(1.0 - e)) + M @ v + b


def _build_numba():
    import numba

    @numba.njit(cache=True)
    def line(x, phi, gamma):
        out = np.empty(x.shape[0], dtype=np.complex128)
        for i in range(x.shape[0]):
            xi = x[i]
            a = np.exp((-1j * phi - gamma - np.pi) * xi)
            b = np.exp((1j * phi - gamma - np.pi) * xi)
            den = xi * (-np.expm1(-2.0 * gamma * xi)) * (-np.expm1(-2.0 * np.pi * xi))
            out[i] = (a - b) / den
        return out

    @numba.njit(cache=True)
    def arc(theta, r, phi, gamma):
        out = np.empty(theta.shape[0], dtype=np.complex128)
        for i in range(theta.shape[0]):
            x = r * np.exp(1j * theta[i])
            out[i] = 1j * np.exp(-1j * phi * x) / (4.0 * np.sinh(gamma * x) * np.sinh(np.pi * x))
        return out

    @numba.njit(cache=True)
    def grad_hess(A, c, s, M, b, v):
        nt, k = A.shape
        H = M.astype(np.complex128)
        g = b.copy()
        for j in range(k):
            for m in range(k):
                g[j] += H[j, m] * v[m]
        for t in range(nt):
            ell = c[t]
            for j in range(k):
                ell += A[t, j] * v[j]
            e = np.exp(ell)
            lg = -s[t] * np.log(1.0 - e)
            w = s[t] * e / (1.0 - e)
            for j in range(k):
                if A[t, j] != 0.0:
                    g[j] += A[t, j] * lg
                    for m in range(k):
                        H[j, m] += A[t, j] * A[t, m] * w
        return g, H

    @numba.njit(cache=True)
    def grad(A, c, s, M, b, v):
        nt, k = A.shape
        g = b.copy()
        for j in range(k):
            for m in range(k):
                g[j] += M[j, m] * v[m]
        for t in range(nt):
            ell = c[t]
            for j in range(k):
                ell += A[t, j] * v[j]
            lg = -s[t] * np.log(1.0 - np.exp(ell))
            for j in range(k):
                g[j] += A[t, j] * lg
        return g

    return line, arc, grad_hess, grad


NUMPY_KERNELS = (_numpy_line, _numpy_arc, _numpy_grad_hess, _numpy_grad)


def _select():
    if os.environ.get("QDVOLUME_NUMBA", "1").strip().lower() in ("0", "false", "no", "off"):
        return "numpy", NUMPY_KERNELS
    try:
        return "numba", _build_numba()
    except ImportError:
        return "numpy", NUMPY_KERNELS


BACKEND, (line_integrand, arc_integrand, grad_hess, grad) = _select()


def numba_kernels():
    """The compiled kernels regardless of the env flag (for benchmarks)."""
    return _build_numba()
