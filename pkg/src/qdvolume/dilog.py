"""Classical dilogarithm family on the complex plane.

All functions use the principal branch.  Li2 has its cut on (1, inf) and
takes the limit from below there, so ``li2(3)`` has imaginary part
``-pi*log(3)``.
"""
import cmath
import math
from fractions import Fraction

import numpy as np

PI2_6 = math.pi ** 2 / 6


class DomainError(ValueError):
    pass


def _bernoulli(n):
    # B_0..B_n as exact fractions, B_1 = -1/2
    B = [Fraction(0)] * (n + 1)
    B[0] = Fraction(1)
    for m in range(1, n + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * B[k]
        B[m] = -acc / (m + 1)
    return B


# coefficients of Li2(z) = sum_n B_n u^(n+1)/(n+1)!, u = -log(1-z)
_BERN_COEF = [float(b / math.factorial(n + 1)) for n, b in enumerate(_bernoulli(60))]


def _as_complex(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite argument {z!r}")
    if z.imag == 0.0:
        z = complex(z.real, 0.0)  # drop a signed zero
    return z


def _log(z: complex) -> complex:
    if z.imag == 0.0:
        z = complex(z.real, 0.0)
    return cmath.log(z)


def _series(z: complex) -> complex:
    s = 0j
    zn = z
    n = 1
    while True:
        t = zn / (n * n)
        s += t
        if abs(t) < 1e-17 * max(abs(s), 1e-300):
            return s
        n += 1
        zn *= z


def _bernoulli_series(z: complex) -> complex:
    u = -_log(1 - z)
    s = 0j
    un = u
    for n, c in enumerate(_BERN_COEF):
        if c != 0.0:
            t = c * un
            s += t
            if n > 4 and abs(t) < 1e-17 * abs(s):
                break
        un *= u
    return s


def _li2_unit_disk(z: complex) -> complex:
    # |z| <= 1
    if abs(z) <= 0.5:
        return _series(z)
    if z.real > 0.5:
        w = 1 - z
        if w == 0:
            return complex(PI2_6)
        return PI2_6 - _log(z) * _log(w) - _li2_left(w)
    return _li2_left(z)


def _li2_left(z: complex) -> complex:
    # |z| <= 1, Re z <= 1/2
    if abs(z) <= 0.5:
        return _series(z)
    return _bernoulli_series(z)


def li2(z) -> complex:
    """Principal-branch Li2(z)."""
    z = _as_complex(z)
    if z == 0:
        return 0j
    if abs(z) <= 1:
        return _li2_unit_disk(z)
    # inversion; on the cut z = x - i0 so -z sits just above the negative axis
    mz = -z
    if z.imag == 0.0:
        lg = complex(math.log(z.real), math.pi) if z.real > 0 else cmath.log(mz)
    else:
        lg = cmath.log(mz)
    return -PI2_6 - 0.5 * lg * lg - _li2_unit_disk(1 / z)


def rogers_l(z) -> complex:
    """Rogers dilogarithm L(z) = Li2(z) + log(z) log(1-z)/2."""
    z = _as_complex(z)
    if z == 0 or z == 1:
        raise DomainError("rogers_l is singular at 0 and 1")
    return li2(z) + 0.5 * _log(z) * _log(1 - z)


def bloch_wigner(z) -> float:
    """Bloch-Wigner function D(z) = Im Li2(z) + arg(1-z) log|z|."""
    z = _as_complex(z)
    if z == 0 or z == 1:
        raise DomainError("bloch_wigner is singular at 0 and 1")
    if z.imag == 0.0:
        return 0.0
    return li2(z).imag + cmath.phase(1 - z) * math.log(abs(z))


def clausen2(theta: float, return_error: bool = False):
    """Clausen function Cl2(theta) = sum sin(n theta)/n^2.

    Direct sine series plus an Abel-summation tail; the error bound of the
    truncated tail is returned when ``return_error`` is set.
    """
    theta = float(theta)
    if not math.isfinite(theta):
        raise DomainError("non-finite angle")
    t = math.remainder(theta, 2 * math.pi)  # in [-pi, pi]
    if t == 0.0 or abs(t) == math.pi:
        return (0.0, 0.0) if return_error else 0.0
    sign = 1.0
    if t < 0:
        sign, t = -1.0, -t
    w = cmath.exp(1j * t)
    gap = abs(1 - w)
    N = 2000
    while 24.0 / (N ** 5 * gap ** 4) > 1e-16 and N < 5_000_000:
        N *= 2
    n = np.arange(1, N, dtype=float)
    head = math.fsum(np.sin(n * t) / (n * n))
    # tail sum_{n>=N} w^n f(n) = w^N/(1-w) sum_j (w/(1-w))^j D^j f(N)
    q = w / (1 - w)
    d0 = 1.0 / (N * N)
    d1 = -(2 * N + 1) / (N * N * (N + 1) ** 2)
    d2 = 2 * (3 * N * N + 6 * N + 2) / (N * N * (N + 1) ** 2 * (N + 2) ** 2)
    tail = w ** N / (1 - w) * (d0 + q * d1 + q * q * d2)
    err = 24.0 / (N ** 5 * gap ** 4) + 1e-16 * N ** 0.5
    val = sign * (head + tail.imag)
    return (val, err) if return_error else val


# vectorised helpers used by the saddle layer

def li2_many(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.array([li2(x) for x in z.ravel()], dtype=complex).reshape(z.shape)


def bloch_wigner_many(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.array([bloch_wigner(x) for x in z.ravel()]).reshape(z.shape)
