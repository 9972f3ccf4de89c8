"""Faddeev quantum dilogarithm and the closed-form H integral.

``log_phi`` integrates

    e^{-i phi x} / (4 sh(gamma x) sh(pi x) x)

along the real line with a small upper semicircle around the triple pole at
the origin.  The two half-lines are folded onto x > r and the pieces are
integrated with adaptive Gauss-Legendre panels.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import _kernels
from .dilog import DomainError

PI = math.pi
_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


class StripError(DomainError):
    pass


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    semicircle_radius: float = 0.5
    truncation: Optional[float] = None  # None: derived from tail_tol
    panel_tol: float = 1e-12
    tail_tol: float = 1e-16
    max_panels: int = 20000
    truncation_scale: float = 1.0

    def refined(self) -> "QuadratureSpec":
        """Half the panel tolerance and twice the truncation point."""
        t = None if self.truncation is None else 2 * self.truncation
        return replace(self, panel_tol=self.panel_tol / 2, truncation=t,
                       truncation_scale=2 * self.truncation_scale)


@dataclass(frozen=True)
class PhiParams:
    gamma: float

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise DomainError("gamma must be positive and finite")


DEFAULT_QUAD = QuadratureSpec()
MAX_TRUNCATION = 4000.0


def radius_guard(gamma: float) -> float:
    return min(PI / gamma, 1.0) * PI / (PI + gamma)


def effective_radius(gamma: float, quad: QuadratureSpec) -> float:
    g = radius_guard(gamma)
    r = quad.semicircle_radius
    return r if r < g else g / 2


def truncation_for(gamma: float, varphi: complex, quad: QuadratureSpec) -> float:
    kappa = PI + gamma - abs(varphi.imag)
    if kappa <= 0:
        raise StripError(f"|Im phi| = {abs(varphi.imag):g} outside strip {PI + gamma:g}")
    r = effective_radius(gamma, quad)
    # integrand bound 2 e^{-kappa x} / (x (1-e^{-2 gamma x})(1-e^{-2 pi x}))
    def bound(x):
        return 2 * math.exp(-kappa * x) / (x * -math.expm1(-2 * gamma * x) * -math.expm1(-2 * PI * x))

    X = max(r + 1.0, math.log(1 / quad.tail_tol) / kappa)
    while bound(X) / kappa > quad.tail_tol:
        X *= 1.25
        if X > MAX_TRUNCATION:
            raise StripError(f"phi = {varphi} too close to the strip edge")
    if quad.truncation is not None:
        X = max(X, quad.truncation)
    return min(X * quad.truncation_scale, MAX_TRUNCATION)


def _adaptive(f, a, b, tol, budget):
    """Adaptive Gauss-Legendre over [a, b]; returns (value, error, panels)."""
    def gl(lo, hi):
        h = 0.5 * (hi - lo)
        return h * np.dot(_GL_W, f(lo + h * (_GL_X + 1.0)))

    stack = [(a, b, gl(a, b))]
    vals, errs = [], []
    used = 0
    while stack:
        lo, hi, whole = stack.pop()
        mid = 0.5 * (lo + hi)
        left, right = gl(lo, mid), gl(mid, hi)
        used += 1
        err = abs(left + right - whole)
        if err <= tol or hi - lo < 1e-9:
            vals.append(left + right)
            errs.append(err)
        else:
            if used > budget:
                raise QuadratureError("panel budget exhausted")
            stack.append((mid, hi, right))
            stack.append((lo, mid, left))
    re = math.fsum(v.real for v in vals)
    im = math.fsum(v.imag for v in vals)
    return complex(re, im), math.fsum(errs), used


def _line_panels(r, X):
    # geometric near r, unit-ish width further out
    edges = [r]
    x = r
    while x < X:
        x = min(X, x + max(0.5, 0.5 * x) if x > 2 else x + max(0.25, x))
        edges.append(x)
    return edges


def log_phi(params: PhiParams, quad: QuadratureSpec, varphi, return_error=False):
    """log Phi_gamma(varphi) as the contour integral itself (strip only)."""
    gamma = params.gamma
    phi = complex(varphi)
    if not (math.isfinite(phi.real) and math.isfinite(phi.imag)):
        raise DomainError("non-finite argument")
    X = truncation_for(gamma, phi, quad)
    r = effective_radius(gamma, quad)
    line = _kernels.line_integrand
    arc = _kernels.arc_integrand
    total_err = 0.0
    parts = []
    edges = _line_panels(r, X)
    budget = quad.max_panels
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e, n = _adaptive(lambda x: line(x, phi, gamma), lo, hi, quad.panel_tol, budget)
        budget -= n
        parts.append(v)
        total_err += e
    # semicircle from theta = pi to 0, i.e. minus the integral over [0, pi]
    v, e, n = _adaptive(lambda t: arc(t, r, phi, gamma), 0.0, PI, quad.panel_tol, budget)
    parts.append(-v)
    total_err += e + quad.tail_tol
    val = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    return (val, total_err) if return_error else val


def phi(params: PhiParams, quad: QuadratureSpec, varphi, return_error=False):
    """Phi_gamma(varphi) inside the strip |Im varphi| < pi + gamma."""
    lv, err = log_phi(params, quad, varphi, return_error=True)
    val = cmath.exp(lv)
    return (val, err * abs(val)) if return_error else val


def _log1pexp(a: complex) -> complex:
    if a.real > 0:
        return a + cmath.log(1 + cmath.exp(-a))
    return cmath.log(1 + cmath.exp(a))


def _log1mexp(a: complex) -> complex:
    if a.real > 0:
        return a + cmath.log(cmath.exp(-a) - 1)
    return cmath.log(1 - cmath.exp(a))


def log_phi_extended(params: PhiParams, quad: QuadratureSpec, varphi) -> complex:
    """log Phi_gamma anywhere off its zeros and poles, via difference equations.

    Shifts by 2i*min(gamma, pi) until |Im| <= max(gamma, pi) (larger shifts first
    when far out), then integrates.  The result is a logarithm, not
    necessarily the analytic continuation of the strip branch.
    """
    gamma = params.gamma
    psi = complex(varphi)
    h = max(gamma, PI)
    small_is_gamma = gamma <= PI
    acc = 0j
    steps = 0
    while abs(psi.imag) > h:
        up = psi.imag < 0
        big = 2 * max(gamma, PI)
        use_big = abs(psi.imag) - big >= -h + 1e-12 and abs(psi.imag) > h + big
        step_gamma = (not use_big) == small_is_gamma
        if step_gamma:
            if up:   # Phi(psi) = Phi(psi + 2i g)(1 + e^{psi + i g})
                fac = _log1pexp(psi + 1j * gamma)
                if not math.isfinite(fac.real):
                    raise DomainError("zero of Phi")
                acc += fac
                psi += 2j * gamma
            else:    # Phi(psi) = Phi(psi - 2i g)/(1 + e^{psi - i g})
                fac = _log1pexp(psi - 1j * gamma)
                if not math.isfinite(fac.real):
                    raise DomainError("pole of Phi")
                acc -= fac
                psi -= 2j * gamma
        else:
            if up:
                fac = _log1pexp((PI / gamma) * (psi + 1j * PI))
                if not math.isfinite(fac.real):
                    raise DomainError("zero of Phi")
                acc += fac
                psi += 2j * PI
            else:
                fac = _log1pexp((PI / gamma) * (psi - 1j * PI))
                if not math.isfinite(fac.real):
                    raise DomainError("pole of Phi")
                acc -= fac
                psi -= 2j * PI
        steps += 1
        if steps > 100000:
            raise DomainError("argument too far from the strip")
    return acc + log_phi(params, quad, psi)


def phi_extended(params: PhiParams, quad: QuadratureSpec, varphi) -> complex:
    return cmath.exp(log_phi_extended(params, quad, varphi))


def log_h_closed(gamma: float, a, b, c, d, quad: QuadratureSpec = DEFAULT_QUAD) -> complex:
    """log H(a,b,c,d) from the closed form, as a sum of component logs."""
    a, b, c, d = (complex(t) for t in (a, b, c, d))
    p = PhiParams(gamma)
    s = 1j * (PI + gamma)
    if a == c:
        raise DomainError("H has a pole at a = c")
    den1 = _log1mexp(a - c)
    den2 = _log1mexp((PI / gamma) * (a - c))
    if not (math.isfinite(den1.real) and math.isfinite(den2.real)):
        raise DomainError("pole of the H denominator")
    return (-math.log(4 * PI * gamma)
            + log_phi_extended(p, quad, a - b - s)
            + log_phi_extended(p, quad, d - a + s)
            - log_phi_extended(p, quad, c - b - s)
            - log_phi_extended(p, quad, d - c + s)
            + c * (-a + b - c + d) / (2j * gamma)
            - den1 - den2)


def h_closed(gamma: float, a, b, c, d, quad: QuadratureSpec = DEFAULT_QUAD) -> complex:
    return cmath.exp(log_h_closed(gamma, a, b, c, d, quad))


def h_asymptotic(a, b, c, d) -> complex:
    """Classical exponent that 2 i gamma log H approaches as gamma -> 0."""
    from .dilog import li2
    a, b, c, d = (complex(t) for t in (a, b, c, d))
    return (li2(cmath.exp(a - b)) + li2(cmath.exp(d - a))
            - li2(cmath.exp(c - b)) - li2(cmath.exp(d - c))
            + c * (-a + b - c + d))


@dataclass(frozen=True)
class LinearRelation:
    """sum coeffs[i] * (p1, p2, p1', p2')[i] = 0"""
    coeffs: tuple

    def residual(self, values) -> complex:
        return sum(c * v for c, v in zip(self.coeffs, values))


def s_element(gamma: float, sign: int, p1, p2, p1p, p2p, quad: QuadratureSpec = DEFAULT_QUAD):
    """Matrix element of S (sign +1) or S^-1 (sign -1).

    Returns (delta relation, amplitude); the delta function itself is never
    evaluated.
    """
    p1, p2, p1p, p2p = (complex(t) for t in (p1, p2, p1p, p2p))
    par = PhiParams(gamma)
    K = (PI ** 2 + gamma ** 2) / 6
    pref = -0.5 * math.log(4 * PI * gamma)
    if sign == 1:
        rel = LinearRelation((1, 1, -1, 0))
        lg = (pref + log_phi_extended(par, quad, p2p - p2 + 1j * PI + 1j * gamma)
              + (-K - gamma * PI / 2 + p1 * (p2p - p2)) / (2j * gamma))
    elif sign == -1:
        rel = LinearRelation((1, 0, -1, -1))
        lg = (pref - log_phi_extended(par, quad, p2 - p2p - 1j * PI - 1j * gamma)
              + (K + gamma * PI / 2 - p1p * (p2 - p2p)) / (2j * gamma))
    else:
        raise ValueError("sign must be +1 or -1")
    return rel, cmath.exp(lg)


def inversion_rhs(gamma: float, x) -> complex:
    x = complex(x)
    return cmath.exp(-(x * x / 2 + (PI ** 2 + gamma ** 2) / 6) / (2j * gamma))


def phi_difference_check(gamma: float, varphi, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Max residual of the gamma- and pi-shift difference equations at varphi.

    Uses the strict (unextended) phi so the check is independent of the
    shifting code.
    """
    p = PhiParams(gamma)
    f = complex(varphi)
    r1 = phi(p, quad, f + 1j * gamma) / phi(p, quad, f - 1j * gamma) - 1 / (1 + cmath.exp(f))
    r2 = (phi(p, quad, f + 1j * PI) / phi(p, quad, f - 1j * PI)
          - 1 / (1 + cmath.exp((PI / gamma) * f)))
    return max(abs(r1), abs(r2))


def duality_residual(gamma: float, varphi, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    f = complex(varphi)
    lhs = phi(PhiParams(PI ** 2 / gamma), quad, f)
    rhs = phi(PhiParams(gamma), quad, gamma * f / PI)
    return abs(lhs - rhs)


def inversion_residual(gamma: float, x, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    p = PhiParams(gamma)
    x = complex(x)
    return abs(phi(p, quad, x) * phi(p, quad, -x) - inversion_rhs(gamma, x))
