import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sdmcap.errors import QuadratureError, RootLocalizationError
from sdmcap.numerics import (
    RationalPolynomial,
    bisect,
    find_roots,
    hermite,
    integrate,
    inverse_erf,
)


class TestRationalPolynomial:
    def test_addition_and_multiplication(self):
        p = RationalPolynomial([1, 2])       # 1 + 2x
        q = RationalPolynomial([0, 0, 3])    # 3x^2
        assert (p + q).coeffs == (Fraction(1), Fraction(2), Fraction(3))
        assert (p * q).coeffs == (0, 0, Fraction(3), Fraction(6))

    def test_subtraction_normalizes_trailing_zeros(self):
        p = RationalPolynomial([1, 0, 5])
        q = RationalPolynomial([0, 0, 5])
        assert (p - q).coeffs == (Fraction(1),)

    def test_differentiate(self):
        p = RationalPolynomial([7, 3, 0, 2])  # 7 + 3x + 2x^3
        assert p.differentiate().coeffs == (Fraction(3), Fraction(0), Fraction(6))

    def test_compose(self):
        p = RationalPolynomial([0, 0, 1])   # x^2
        q = RationalPolynomial([1, 1])      # 1 + x
        assert p.compose(q).coeffs == (Fraction(1), Fraction(2), Fraction(1))

    def test_call_is_exact_for_rational_input(self):
        p = RationalPolynomial([Fraction(1, 2), Fraction(1, 3)])
        assert p(Fraction(3)) == Fraction(3, 2)

    @given(st.lists(st.integers(-20, 20), min_size=1, max_size=6),
           st.lists(st.integers(-20, 20), min_size=1, max_size=6),
           st.integers(-5, 5))
    def test_product_evaluation_distributes(self, a, b, x):
        p, q = RationalPolynomial(a), RationalPolynomial(b)
        assert (p * q)(x) == p(x) * q(x)


class TestHermite:
    def test_first_few_physicists_polynomials(self):
        assert hermite(0).coeffs == (Fraction(1),)
        assert hermite(1).coeffs == (0, Fraction(2))
        assert hermite(2).coeffs == (Fraction(-2), 0, Fraction(4))
        assert hermite(3).coeffs == (0, Fraction(-12), 0, Fraction(8))
        assert hermite(4).coeffs == (Fraction(12), 0, Fraction(-48), 0, Fraction(16))

    def test_recurrence(self):
        # H_{n+1} = 2x H_n - 2n H_{n-1}
        x = RationalPolynomial([0, 1])
        for n in range(1, 8):
            lhs = hermite(n + 1)
            rhs = x * hermite(n) * RationalPolynomial([2]) - \
                hermite(n - 1) * RationalPolynomial([2 * n])
            assert lhs.coeffs == rhs.coeffs


class TestIntegrate:
    def test_polynomial_is_exact(self):
        assert integrate(lambda x: x * x, 0.0, 3.0) == pytest.approx(9.0, abs=1e-12)

    def test_gaussian_integral(self):
        value = integrate(lambda x: math.exp(-x * x), -10.0, 10.0, tol=1e-12)
        assert value == pytest.approx(math.sqrt(math.pi), abs=1e-11)

    def test_budget_exhaustion_carries_best_estimate(self):
        with pytest.raises(QuadratureError) as err:
            integrate(lambda x: abs(x - math.pi / 10) ** -0.5, 0.0, 1.0,
                      tol=1e-14, max_depth=4)
        assert math.isfinite(err.value.best_estimate)


class TestRootFinding:
    def test_bisect_cubic(self):
        root = bisect(lambda x: x**3 - 2.0, 0.0, 2.0)
        assert root == pytest.approx(2.0 ** (1.0 / 3.0), abs=1e-11)

    def test_find_roots_of_sine(self):
        roots = find_roots(math.sin, (0.5, 7.0))
        assert len(roots) == 2
        assert roots[0] == pytest.approx(math.pi, abs=1e-10)
        assert roots[1] == pytest.approx(2.0 * math.pi, abs=1e-10)


class TestInverseErf:
    @pytest.mark.parametrize("y", [-0.999, -0.5, -1e-6, 0.0, 0.1, 0.9, 0.99999])
    def test_roundtrip(self, y):
        assert math.erf(inverse_erf(y)) == pytest.approx(y, abs=1e-12)

    def test_normal_quantile_value(self):
        # standard-normal quantile at p = 0.01 via sqrt(2) erfinv(2p - 1)
        q = math.sqrt(2.0) * inverse_erf(2.0 * 0.01 - 1.0)
        assert q == pytest.approx(-2.3263478740408408, abs=1e-9)

    @given(st.floats(-0.99999, 0.99999))
    @settings(max_examples=200)
    def test_roundtrip_property(self, y):
        assert math.erf(inverse_erf(y)) == pytest.approx(y, abs=1e-11)

    def test_domain_edges(self):
        with pytest.raises(ValueError):
            inverse_erf(1.0)
        with pytest.raises(ValueError):
            inverse_erf(-1.5)
