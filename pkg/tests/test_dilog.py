import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from qdvolume.dilog import (DomainError, PI2_6, bloch_wigner, bloch_wigner_many, clausen2, li2,
                            li2_many, rogers_l)
from qdvolume.checks import (bloch_five_term, classical_suite, rogers_residual,
                             schaeffer_residual)

CL2_PI3 = 1.0149416064096536   # Cl2(pi/3)
CATALAN = 0.915965594177219015


def series_li2(z, n=10_000):
    k = np.arange(1, n + 1, dtype=float)
    terms = z ** k / k ** 2
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def brute_clausen(theta, n=2_000_000):
    k = np.arange(1, n + 1, dtype=float)
    return math.fsum(np.sin(k * theta) / k ** 2)


def cplx(rmax=3.0):
    return st.builds(complex, st.floats(-rmax, rmax), st.floats(-rmax, rmax))


def test_special_values():
    assert li2(0) == 0
    assert abs(li2(1) - PI2_6) < 1e-15
    assert abs(li2(-1) + math.pi ** 2 / 12) < 1e-15
    assert abs(li2(0.5) - (math.pi ** 2 / 12 - math.log(2) ** 2 / 2)) < 1e-15


def test_cut_is_approached_from_below():
    # Li2(x - i0) for x > 1
    x = 3.0
    assert abs(li2(x).imag + math.pi * math.log(x)) < 1e-14
    assert abs(li2(x) - li2(complex(x, -1e-13))) < 1e-11


def test_bloch_wigner_regular_tetrahedron():
    assert abs(bloch_wigner(cmath.exp(1j * math.pi / 3)) - CL2_PI3) < 1e-10


@pytest.mark.parametrize("x", [-4.0, -0.3, 0.2, 0.9, 1.5, 7.0])
def test_bloch_wigner_vanishes_on_reals(x):
    assert bloch_wigner(x) == 0.0


def test_singular_points():
    for f in (rogers_l, bloch_wigner):
        with pytest.raises(DomainError):
            f(0)
        with pytest.raises(DomainError):
            f(1)
    with pytest.raises(DomainError):
        li2(complex(math.nan, 0))
    with pytest.raises(DomainError):
        clausen2(math.inf)


def test_clausen_values():
    assert clausen2(0) == 0
    assert abs(clausen2(math.pi / 3) - CL2_PI3) < 1e-13
    assert abs(clausen2(math.pi / 2) - CATALAN) < 1e-13
    assert abs(clausen2(-1.1) + clausen2(1.1)) < 1e-15
    assert abs(clausen2(1.1 + 2 * math.pi) - clausen2(1.1)) < 1e-13


@pytest.mark.parametrize("theta", [0.3, 1.0, math.pi / 3, 2.5, 3.1])
def test_clausen_against_brute_force(theta):
    val, err = clausen2(theta, return_error=True)
    assert abs(val - brute_clausen(theta)) < 1e-11
    assert err < 1e-12


@pytest.mark.parametrize("theta", [0.4, 1.3, 2.9, -2.0])
def test_clausen_is_imaginary_part_on_circle(theta):
    assert abs(clausen2(theta) - li2(cmath.exp(1j * theta)).imag) < 1e-13


def test_volume_oracle():
    assert abs(2 * clausen2(math.pi / 3) - 2.0298832128) < 1e-10


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 0.99), st.floats(-math.pi, math.pi))
def test_series_oracle(r, t):
    z = r * cmath.exp(1j * t)
    assert abs(li2(z) - series_li2(z)) < 1e-13


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 0.9), st.floats(-math.pi, math.pi))
def test_duplication(r, t):
    z = r * cmath.exp(1j * t)
    assert abs(li2(z) + li2(-z) - 0.5 * li2(z * z)) < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 20), st.floats(-1.55, 1.55))
def test_inversion(r, t):
    z = r * cmath.exp(1j * t)
    lhs = li2(-z) + li2(-1 / z)
    assert abs(lhs - 2 * li2(-1) + 0.5 * cmath.log(z) ** 2) < 1e-12


@settings(max_examples=200, deadline=None)
@given(cplx())
def test_reflection(z):
    # off the cuts (-inf, 0] and [1, inf)
    if abs(z.imag) < 1e-3 or abs(z) < 1e-3 or abs(1 - z) < 1e-3:
        return
    assert abs(li2(z) + li2(1 - z) - PI2_6 + cmath.log(z) * cmath.log(1 - z)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.floats(0.02, 0.98), st.floats(0.02, 0.98))
def test_schaeffer_and_rogers(a, b):
    x, y = max(a, b), min(a, b)
    if x - y < 1e-6:
        return
    assert schaeffer_residual(x, y) < 1e-11
    assert rogers_residual(x, y) < 1e-11


def upper():
    return st.builds(complex, st.floats(-3, 3), st.floats(0.01, 3))


@settings(max_examples=200, deadline=None)
@given(upper())
def test_bloch_wigner_symmetries(z):
    assert abs(bloch_wigner(z) + bloch_wigner(1 / z)) < 1e-12
    assert abs(bloch_wigner(z) + bloch_wigner(1 - z)) < 1e-12
    assert abs(bloch_wigner(z) + bloch_wigner(z.conjugate())) < 1e-15


@settings(max_examples=200, deadline=None)
@given(upper(), upper())
def test_bloch_wigner_five_term(x, y):
    assume(abs(x - y) > 1e-3)
    assert bloch_five_term(x, y) < 1e-11


def test_classical_suite_all_below_threshold():
    res = classical_suite(n=100, seed=3)
    assert set(res) >= {"duplication", "inversion", "reflection", "schaeffer_pentagon",
                        "rogers_five_term", "bloch_wigner_five_term"}
    assert max(res.values()) < 1e-11, res


def test_vectorised_helpers():
    z = np.array([[0.3 + 0.2j, -2.0], [1.5j, 4.0 - 1j]])
    out = li2_many(z)
    assert out.shape == z.shape
    assert out[1, 0] == li2(1.5j)
    assert bloch_wigner_many(z)[0, 0] == bloch_wigner(0.3 + 0.2j)
