"""Identity suites shared by the CLI ``check`` command and the tests.

Each suite returns {identity name: max residual}.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .dilog import PI2_6, bloch_wigner, li2, rogers_l
from .qdilog import (DEFAULT_QUAD, PhiParams, duality_residual, inversion_residual,
                     log_phi, phi_difference_check)

INVERSION_GRID = [(g, x) for g in (0.3, 0.8) for x in (-2.0, -1.0, 0.0, 1.0, 2.0)]
DIFFERENCE_GRID = [(g, f) for g in (0.3, 0.6, 0.8) for f in (-1.0, 0.0, 0.4, 1.0)]
DUALITY_GRID = [(1.2, 0.3), (0.8, -0.5), (2.0, 0.7)]


def _rand_disk(rng, n, rmax):
    r = rmax * np.sqrt(rng.uniform(0, 1, n))
    t = rng.uniform(-math.pi, math.pi, n)
    return r * np.exp(1j * t)


def _pairs(rng, n):
    # 0 < y < x < 1
    a = rng.uniform(0.02, 0.98, (n, 2))
    return np.max(a, axis=1), np.min(a, axis=1)


def schaeffer_residual(x, y) -> float:
    lhs = li2((1 - 1 / x) / (1 - 1 / y))
    rhs = (li2(x) - li2(y) + li2(y / x) + li2((1 - x) / (1 - y)) - PI2_6
           + cmath.log(x) * cmath.log((1 - x) / (1 - y)))
    return abs(lhs - rhs)


def rogers_residual(x, y) -> float:
    s = (rogers_l(x) - rogers_l(y) + rogers_l(y / x)
         - rogers_l((1 - 1 / x) / (1 - 1 / y)) + rogers_l((1 - x) / (1 - y)))
    return abs(s - PI2_6)


def bloch_five_term(x, y) -> float:
    return abs(bloch_wigner(x) - bloch_wigner(y) + bloch_wigner(y / x)
               - bloch_wigner((1 - 1 / x) / (1 - 1 / y)) + bloch_wigner((1 - x) / (1 - y)))


def classical_suite(n: int = 100, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    out = {}
    zs = _rand_disk(rng, n, 0.9)
    out["duplication"] = max(abs(li2(z) + li2(-z) - 0.5 * li2(z * z)) for z in zs)
    zs = rng.uniform(0.05, 5, n) * np.exp(1j * rng.uniform(-1.5, 1.5, n))
    out["inversion"] = max(abs(li2(-z) + li2(-1 / z) - 2 * li2(-1) + 0.5 * cmath.log(z) ** 2)
                           for z in zs)
    zs = rng.uniform(-3, 3, n) + 1j * rng.uniform(-3, 3, n)
    out["reflection"] = max(abs(li2(z) + li2(1 - z) - PI2_6 + cmath.log(z) * cmath.log(1 - z))
                            for z in zs)
    xs, ys = _pairs(rng, n)
    out["schaeffer_pentagon"] = max(schaeffer_residual(x, y) for x, y in zip(xs, ys))
    out["rogers_five_term"] = max(rogers_residual(x, y) for x, y in zip(xs, ys))
    zs = rng.uniform(-3, 3, n) + 1j * rng.uniform(0.01, 3, n)
    out["bloch_wigner_inverse"] = max(abs(bloch_wigner(z) + bloch_wigner(1 / z)) for z in zs)
    out["bloch_wigner_reflection"] = max(abs(bloch_wigner(z) + bloch_wigner(1 - z)) for z in zs)
    ws = rng.uniform(-3, 3, n) + 1j * rng.uniform(0.01, 3, n)
    out["bloch_wigner_five_term"] = max(bloch_five_term(x, y) for x, y in zip(zs, ws))
    return out


def quantum_suite(quad=DEFAULT_QUAD) -> dict:
    out = {}
    out["inversion"] = max(inversion_residual(g, x, quad) for g, x in INVERSION_GRID)
    out["difference_equations"] = max(phi_difference_check(g, f, quad) for g, f in DIFFERENCE_GRID)
    out["duality"] = max(duality_residual(g, f, quad) for g, f in DUALITY_GRID)
    ref = quad.refined()
    out["refinement_stability"] = max(
        abs(log_phi(PhiParams(g), quad, x) - log_phi(PhiParams(g), ref, x))
        for g, x in INVERSION_GRID)
    return out


def classical_limit_error(gamma: float, varphi: float = 0.7, quad=DEFAULT_QUAD) -> float:
    lp = log_phi(PhiParams(gamma), quad, varphi)
    return abs(2j * gamma * lp - li2(-math.exp(varphi)))
