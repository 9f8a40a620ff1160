import math

import numpy as np
import pytest
from fractions import Fraction

from hypothesis import assume, given, settings, strategies as st

from fracline.errors import DomainError
from fracline.kernel import (holder_quotients, kernel_eval, kernel_model, mass, normalization_a0,
                             self_similarity_residual)
from fracline.quadrature import aitken_limit, gauss_legendre, pow_diff, singular_cell_weights
from fracline.summation import NeumaierSum, dd_add, dd_to_float, fsum, two_prod, two_sum

# a0 from the closed form 1 / (2 Gamma(alpha/(1+alpha))), 20 digits via mpmath
A0_REF = {
    0.25: 0.10891244210583363078,
    0.5: 0.18664108695369761416,
    0.75: 0.24183659689895081146,
}


def test_a0_heat_case():
    assert normalization_a0(1.0) == pytest.approx(0.5 / math.sqrt(math.pi), abs=1e-9)


@pytest.mark.parametrize("a", sorted(A0_REF))
def test_a0_frozen(a):
    assert normalization_a0(a) == pytest.approx(A0_REF[a], abs=1e-6)


def test_a0_tolerance_floor():
    with pytest.raises(DomainError):
        normalization_a0(0.5, tol=1e-11)


def test_nonpositive_time_is_zero():
    m = kernel_model(0.5)
    assert kernel_eval(m, 0.3, 0.0) == 0.0
    assert kernel_eval(m, 0.3, -1.0) == 0.0
    out = kernel_eval(m, np.array([0.0, 1.0]), np.array([[0.0], [1.0]]))
    assert out.shape == (2, 2)
    np.testing.assert_array_equal(out[0], 0.0)
    assert np.all(out[1] > 0.0)


def test_even_in_x():
    m = kernel_model(0.5)
    x = np.linspace(0.0, 20.0, 81)
    np.testing.assert_array_equal(kernel_eval(m, x, 1.3), kernel_eval(m, -x, 1.3))


@pytest.mark.parametrize("a", [0.25, 0.5, 1.0])
def test_sup_at_origin(a):
    m = kernel_model(a)
    for t in (0.1, 1.0, 10.0):
        peak = m.a0 * t ** (-1.0 / (1.0 + a))
        assert kernel_eval(m, 0.0, t) == pytest.approx(peak, rel=1e-14)
        assert np.max(kernel_eval(m, np.linspace(-5, 5, 201), t)) <= peak * (1 + 1e-14)


@pytest.mark.parametrize("a", [0.5, 1.0])
def test_half_mass(a):
    m = kernel_model(a)
    for t in (0.5, 2.0):
        assert mass(m, t) == pytest.approx(0.5, abs=1e-8)
    with pytest.raises(DomainError):
        mass(m, 0.0)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.05, max_value=20.0))
def test_self_similarity(lam):
    assert self_similarity_residual(kernel_model(0.5), lam) <= 1e-12


def test_self_similarity_rejects_bad_lambda():
    with pytest.raises(DomainError):
        self_similarity_residual(kernel_model(0.5), -1.0)


@pytest.mark.parametrize("a", [0.25, 0.5, 0.75])
def test_holder_quotient_limit(a):
    # E_x(x,1) ~ -a0 c1 (1+a) x^a / (1+a) near 0, c1 = 1/Gamma(2+a)
    m = kernel_model(a)
    q = holder_quotients(m, x=np.array([1e-4]))
    assert q[0] == pytest.approx(m.a0 / math.gamma(2.0 + a), abs=1e-3)
    # a larger exponent makes the quotient grow towards 0
    steep = holder_quotients(m, exponent=a + 0.1)
    assert steep[0] > steep[-1]


def test_extreme_times_stay_finite():
    m = kernel_model(0.5)
    for t in (1e-300, 1e300):
        v = kernel_eval(m, np.array([0.0, 1.0]), t)
        assert np.all(np.isfinite(v)) and np.all(v >= 0.0)


def test_gauss_legendre_integrates_polynomials():
    x, w = gauss_legendre(5)
    # exact through degree 9 on [0, 1]
    assert np.dot(w, x ** 9) == pytest.approx(0.1, rel=1e-14)
    assert np.all((x > 0.0) & (x < 1.0))


def test_pow_diff_small_gap():
    assert float(pow_diff(1.0 + 1e-12, 1.0, 0.5)) == pytest.approx(0.5e-12, rel=1e-9)
    assert float(pow_diff(2.0, 0.0, 0.5)) == pytest.approx(math.sqrt(2.0), rel=1e-15)


@pytest.mark.parametrize("B", [0.0, 0.5, 30.0])
def test_singular_cell_weight_moments(B):
    # weights reproduce int_B^A d^(a-1) dd and int_B^A d^(a-1) (d - B) dd
    a, A = 0.4, B + 0.7
    wf, wn = singular_cell_weights(a, np.array([A]), np.array([B]))
    zeroth = (A ** a - B ** a) / a
    first = (A ** (a + 1) - B ** (a + 1)) / (a + 1) - B * zeroth
    assert wf[0] + wn[0] == pytest.approx(zeroth, rel=1e-12)
    assert wf[0] * (A - B) == pytest.approx(first, rel=1e-12)


def test_aitken_geometric_sequence():
    seq = [1.0 - 0.5 ** k for k in range(6)]
    est, change = aitken_limit(seq)
    assert est == pytest.approx(1.0, abs=1e-15)
    assert change == pytest.approx(0.5 ** 5, rel=1e-12)
    assert aitken_limit([2.0]) == (2.0, math.inf)


@given(st.floats(allow_nan=False, allow_infinity=False, min_value=-1e300, max_value=1e300),
       st.floats(allow_nan=False, allow_infinity=False, min_value=-1e300, max_value=1e300))
def test_two_sum_error_free(a, b):
    s, e = two_sum(a, b)
    assert s == a + b
    assert math.fsum([a, b, -s]) == e


@given(st.floats(min_value=-1e100, max_value=1e100), st.floats(min_value=-1e100, max_value=1e100))
def test_two_prod_error_free(a, b):
    # the low part must not underflow for the split to be exact
    assume(a == 0.0 or b == 0.0 or abs(a * b) > 1e-250)
    p, e = two_prod(a, b)
    assert p == a * b
    assert Fraction(p) + Fraction(e) == Fraction(a) * Fraction(b)


def test_compensated_sums():
    vals = [1e16, 1.0, -1e16, 1.0]
    assert fsum(vals) == 2.0
    acc = NeumaierSum()
    for v in vals:
        acc.add(v)
    assert acc.value == 2.0
    assert dd_to_float(dd_add((1.0, 1e-17), (1.0, 1e-17))) == pytest.approx(2.0, abs=1e-16)


def test_heat_kernel_value():
    assert kernel_eval(kernel_model(1.0), 2.0, 1.0) == pytest.approx(0.1037768744, rel=1e-9)
    assert kernel_eval(kernel_model(0.5), 0.0, 1.0) == kernel_model(0.5).a0
