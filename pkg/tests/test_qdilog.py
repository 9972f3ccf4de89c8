import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdvolume import _kernels
from qdvolume.checks import (DIFFERENCE_GRID, INVERSION_GRID, classical_limit_error,
                             quantum_suite)
from qdvolume.dilog import DomainError
from qdvolume.qdilog import (DEFAULT_QUAD, PhiParams, QuadratureSpec, StripError,
                             duality_residual, effective_radius, h_asymptotic, h_closed,
                             inversion_residual, inversion_rhs, log_h_closed, log_phi,
                             phi, phi_difference_check, phi_extended, radius_guard, s_element)

PI = math.pi
H_POINT = (1.5 + 0.2j, 3.5 + 0.1j, 1.9 - 0.1j, 1.3 + 0.3j)


def test_value_at_origin():
    g = 0.5
    want = cmath.exp(1j * (PI ** 2 + g ** 2) / (24 * g))
    assert abs(phi(PhiParams(g), DEFAULT_QUAD, 0) - want) < 1e-12


@pytest.mark.parametrize("g,x", INVERSION_GRID)
def test_inversion_grid(g, x):
    assert inversion_residual(g, x) < 1e-8


@pytest.mark.parametrize("g,f", DIFFERENCE_GRID + [(0.6, 0.4 + 0.5j)])
def test_difference_equations(g, f):
    assert phi_difference_check(g, f) < 1e-8


def test_difference_rhs_at_zero_is_half():
    # Phi(i g)/Phi(-i g) = 1/2 exactly at varphi = 0
    p = PhiParams(0.7)
    r = phi(p, DEFAULT_QUAD, 0.7j) / phi(p, DEFAULT_QUAD, -0.7j)
    assert abs(r - 0.5) < 1e-12


@pytest.mark.parametrize("g,f", [(1.2, 0.3), (0.8, -0.5), (2.0, 0.7), (5.0, 0.2)])
def test_duality(g, f):
    assert duality_residual(g, f) < 1e-8


def test_quantum_suite():
    res = quantum_suite()
    assert max(res.values()) < 1e-8, res
    assert res["refinement_stability"] < 1e-9


def test_resolution_oracle():
    # a different contour radius is a different discretisation of the same integral
    for g, x in [(0.5, 0.3), (0.3, -2.0), (0.8, 1.0 + 0.4j)]:
        a = log_phi(PhiParams(g), DEFAULT_QUAD, x)
        b = log_phi(PhiParams(g), QuadratureSpec(semicircle_radius=0.2, panel_tol=1e-13), x)
        assert abs(a - b) < 1e-11


def test_classical_limit_order():
    e1, e2 = classical_limit_error(0.1), classical_limit_error(0.05)
    assert 0.15 <= e2 / e1 <= 0.35
    assert e2 < 1e-3


@pytest.mark.parametrize("x", [-3.0, -1.0, 0.0, 2.0, 5.0])
def test_unit_modulus_on_real_line(x):
    assert abs(abs(phi(PhiParams(0.7), DEFAULT_QUAD, x)) - 1) < 1e-12


def test_strip_error():
    with pytest.raises(StripError):
        phi(PhiParams(0.5), DEFAULT_QUAD, 10j)
    with pytest.raises(StripError):
        phi(PhiParams(0.5), DEFAULT_QUAD, 1 + (PI + 0.5) * 1j)
    with pytest.raises(DomainError):
        PhiParams(0.0)
    with pytest.raises(DomainError):
        PhiParams(-1.0)


def test_extended_matches_difference_equation_outside_strip():
    p = PhiParams(0.5)
    f = 0.3 + 3.4j  # f + i g is outside the strip
    lhs = phi_extended(p, DEFAULT_QUAD, f + 0.5j) / phi_extended(p, DEFAULT_QUAD, f - 0.5j)
    assert abs(lhs - 1 / (1 + cmath.exp(f))) < 1e-10
    # far out, several shifts
    z = 0.2 + 9.0j
    lhs = phi_extended(p, DEFAULT_QUAD, z + 0.5j) / phi_extended(p, DEFAULT_QUAD, z - 0.5j)
    assert abs(lhs - 1 / (1 + cmath.exp(z))) < 1e-9


def test_extended_agrees_inside_strip():
    p = PhiParams(0.6)
    for f in (0.2, -1 + 1j, 0.5 - 2.5j):
        assert abs(phi_extended(p, DEFAULT_QUAD, f) - phi(p, DEFAULT_QUAD, f)) < 1e-13


def test_radius_guard():
    assert effective_radius(0.5, DEFAULT_QUAD) == 0.5
    g = 10.0
    assert effective_radius(g, DEFAULT_QUAD) == pytest.approx(radius_guard(g) / 2)


def test_error_estimate_reported():
    val, err = phi(PhiParams(0.5), DEFAULT_QUAD, 1.2, return_error=True)
    assert 0 < err < 1e-10


def test_backends_agree():
    try:
        nb = _kernels.numba_kernels()
    except ImportError:
        pytest.skip("numba missing")
    x = np.linspace(0.3, 12, 101)
    th = np.linspace(0, PI, 33)
    for i, (f_np, f_nb) in enumerate(zip(_kernels.NUMPY_KERNELS[:2], nb[:2])):
        a = f_np(x if i == 0 else th, *((0.3 + 0.1j, 0.7) if i == 0 else (0.4, 0.3 + 0.1j, 0.7)))
        b = f_nb(x if i == 0 else th, *((0.3 + 0.1j, 0.7) if i == 0 else (0.4, 0.3 + 0.1j, 0.7)))
        assert np.max(np.abs(a - b)) < 1e-12 * np.max(np.abs(a))


def h_inputs():
    c = st.builds(complex, st.floats(-2, 2), st.floats(-0.5, 0.5))
    return st.tuples(st.floats(0.3, 1.5), c, c, c, c)


@settings(max_examples=100, deadline=None)
@given(h_inputs())
def test_h_symmetry(args):
    g, a, b, c, d = args
    if abs(a - c) < 1e-3:
        return
    h1, h2 = h_closed(g, a, b, c, d), h_closed(g, c, d, a, b)
    assert abs(h1 - h2) <= 1e-12 * abs(h1)


def test_h_pole():
    with pytest.raises(DomainError):
        log_h_closed(0.5, 1.0, 0.2, 1.0, 0.3)


def test_h_asymptotics_improves():
    A = h_asymptotic(*H_POINT)
    errs = [abs(2j * g * log_h_closed(g, *H_POINT) - A) / abs(A) for g in (0.08, 0.04, 0.02)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 5e-2


def test_s_element_relations():
    rel, _ = s_element(0.4, 1, 0.3, 0.2, 0.5, 0.1)
    assert rel.residual((0.3, 0.2, 0.5, 0.1)) == 0
    rel, _ = s_element(0.4, -1, 0.5, 0.1, 0.3, 0.2)
    assert rel.residual((0.5, 0.1, 0.3, 0.2)) == 0
    with pytest.raises(ValueError):
        s_element(0.4, 0, 0, 0, 0, 0)


@pytest.mark.parametrize("g,p1,q1p,u", [(0.4, 0.3, -0.2, 0.25), (0.7, -0.5, 0.1, -0.6),
                                         (0.3, 0.0, 0.0, 1.1)])
def test_s_times_inverse_against_inversion_formula(g, p1, q1p, u):
    # S and S^-1 at opposite momentum transfer combine through Phi(x) Phi(-x)
    K = (PI ** 2 + g ** 2) / 6
    p2 = 0.1
    _, aS = s_element(g, 1, p1, p2, p1 + p2, p2 + u)
    q2p = 0.4
    q = (q1p + q2p, q2p - u, q1p, q2p)       # q2 - q2' = -u
    relI, aI = s_element(g, -1, *q)
    assert abs(relI.residual(q)) < 1e-15
    x = u + 1j * PI + 1j * g
    want = inversion_rhs(g, x) * cmath.exp((-2 * K - g * PI + (p1 - q1p) * u) / (2j * g))
    assert abs(aS / aI - want) < 1e-8 * abs(want)
