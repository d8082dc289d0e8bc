import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rwa_lab.errors import OrderMismatchError, PoleError
from rwa_lab.series import (
    LinearFactor,
    Series,
    derivative_of_factor_product,
    reflect,
    series_mul,
    series_of_factor,
    series_one,
)

from helpers import product_eval, repeated_central_difference, richardson_central_difference


class TestSeriesOfFactor:
    def test_positive_exponent_square(self):
        s = series_of_factor(LinearFactor(2.0, 2), 2)
        assert np.allclose(s.coeffs, [4.0, 4.0, 1.0])

    def test_geometric_series(self):
        s = series_of_factor(LinearFactor(1.0, -1), 3)
        assert np.allclose(s.coeffs, [1.0, -1.0, 1.0, -1.0])

    def test_inverse_square(self):
        # (3+t)^-2 differentiated twice by hand: [1/9, -2/27, 1/27]
        s = series_of_factor(LinearFactor(3.0, -2), 2)
        assert np.allclose(s.coeffs, [1 / 9, -2 / 27, 1 / 27], rtol=1e-14)

    def test_high_degree_truncates(self):
        s = series_of_factor(LinearFactor(1.0, 5), 2)
        assert np.allclose(s.coeffs, [1.0, 5.0, 10.0])

    def test_zero_offset_positive_exponent(self):
        s = series_of_factor(LinearFactor(0.0, 2), 3)
        assert np.allclose(s.coeffs, [0.0, 0.0, 1.0, 0.0])

    def test_pole_raises(self):
        with pytest.raises(PoleError):
            series_of_factor(LinearFactor(0.0, -1), 2)

    def test_near_pole_guard(self):
        with pytest.raises(PoleError):
            series_of_factor(LinearFactor(1e-10, -2), 2)

    @given(st.integers(min_value=-9, max_value=9).filter(lambda d: d != 0),
           st.integers(min_value=0, max_value=8))
    def test_binomial_exactness_for_integers(self, d, e):
        s = series_of_factor(LinearFactor(float(d), e), e)
        expect = [math.comb(e, k) * d ** (e - k) for k in range(e + 1)]
        assert np.max(np.abs(s.coeffs - np.array(expect, dtype=float))) <= 1e-12 * max(map(abs, expect))


class TestSeriesMul:
    def test_difference_of_squares(self):
        a = Series(np.array([1.0, 1.0, 0.0]))
        b = Series(np.array([1.0, -1.0, 0.0]))
        assert np.allclose(series_mul(a, b).coeffs, [1.0, 0.0, -1.0])

    def test_identity(self):
        a = Series(np.array([3.0, -2.0, 0.5, 7.0]))
        assert np.allclose(series_mul(a, series_one(3)).coeffs, a.coeffs)

    def test_truncated_fourth_power(self):
        a = Series(np.array([1.0, 2.0, 1.0]))
        assert np.allclose(series_mul(a, a).coeffs, [1.0, 4.0, 6.0])

    def test_order_mismatch(self):
        with pytest.raises(OrderMismatchError):
            series_mul(series_one(2), series_one(3))

    def test_reflect_negates_odd(self):
        a = Series(np.array([1.0, 2.0, 3.0, 4.0]))
        assert np.allclose(reflect(a).coeffs, [1.0, -2.0, 3.0, -4.0])


class TestDerivativeOfFactorProduct:
    def test_plain_evaluation(self):
        assert derivative_of_factor_product([LinearFactor(5.0, 3)], 0) == 125.0

    def test_second_derivative_of_reciprocal(self):
        got = derivative_of_factor_product([LinearFactor(1.0, -1)], 2)
        assert got == pytest.approx(2.0, rel=1e-14)

    def test_mixed_product_first_derivative(self):
        # d/dt (2+t)^2/(1+t) = (2+t)*t/(1+t)^2 vanishes at 0
        got = derivative_of_factor_product([LinearFactor(2.0, 2), LinearFactor(1.0, -1)], 1)
        assert got == pytest.approx(0.0, abs=1e-14)
        fd = repeated_central_difference(product_eval([(2.0, 2), (1.0, -1)]), 1, 1e-5)
        assert got == pytest.approx(fd, abs=1e-9)

    @pytest.mark.parametrize("r", [0, 1, 2])
    def test_finite_difference_agreement(self, r):
        rng = np.random.default_rng(17 + r)
        for _ in range(10):
            factors = []
            for _ in range(rng.integers(1, 4)):
                d = rng.uniform(0.3, 3.0) * rng.choice([-1.0, 1.0])
                e = int(rng.integers(-3, 4))
                factors.append((d, e))
            got = derivative_of_factor_product([LinearFactor(d, e) for d, e in factors], r)
            fd = repeated_central_difference(product_eval(factors), r, 1e-4)
            assert got == pytest.approx(fd, rel=1e-5, abs=1e-7)

    @pytest.mark.parametrize("r", [3, 4])
    def test_symbolic_agreement_high_order(self, r):
        # FD stencils on rational factors drown in noise/truncation beyond
        # r = 2 (nearby poles), so high orders get the exact symbolic oracle
        import sympy as sp

        t = sp.Symbol("t")
        rng = np.random.default_rng(29 + r)
        for _ in range(10):
            factors = []
            for _ in range(rng.integers(1, 4)):
                d = float(rng.uniform(0.3, 3.0) * rng.choice([-1.0, 1.0]))
                e = int(rng.integers(-3, 4))
                factors.append((d, e))
            got = derivative_of_factor_product([LinearFactor(d, e) for d, e in factors], r)
            expr = sp.prod([(sp.Float(d, 30) + t) ** e for d, e in factors])
            want = float(sp.diff(expr, t, r).subs(t, 0).evalf(30))
            assert got == pytest.approx(want, rel=1e-10, abs=1e-10)

    @pytest.mark.parametrize("r", [3, 4])
    def test_richardson_fd_on_polynomial_factors(self, r):
        # positive exponents only: no poles, so a wide stencil stays clean
        rng = np.random.default_rng(43 + r)
        for _ in range(6):
            factors = [(float(rng.uniform(0.3, 3.0) * rng.choice([-1.0, 1.0])),
                        int(rng.integers(0, 4))) for _ in range(rng.integers(1, 4))]
            got = derivative_of_factor_product([LinearFactor(d, e) for d, e in factors], r)
            fd = richardson_central_difference(product_eval(factors), r, 1e-2)
            assert got == pytest.approx(fd, rel=1e-5, abs=1e-6)

    @settings(max_examples=60, deadline=None)
    @given(
        d1=st.floats(min_value=0.1, max_value=5.0),
        s1=st.sampled_from([-1.0, 1.0]),
        e1=st.integers(min_value=-3, max_value=3),
        d2=st.floats(min_value=0.1, max_value=5.0),
        s2=st.sampled_from([-1.0, 1.0]),
        e2=st.integers(min_value=-3, max_value=3),
        r=st.integers(min_value=0, max_value=5),
    )
    def test_leibniz_rule(self, d1, s1, e1, d2, s2, e2, r):
        f1 = LinearFactor(s1 * d1, e1)
        f2 = LinearFactor(s2 * d2, e2)
        whole = derivative_of_factor_product([f1, f2], r)
        parts = sum(
            math.comb(r, k)
            * derivative_of_factor_product([f1], k)
            * derivative_of_factor_product([f2], r - k)
            for k in range(r + 1)
        )
        assert whole == pytest.approx(parts, rel=1e-10, abs=1e-10)

    def test_propagated_pole(self):
        with pytest.raises(PoleError):
            derivative_of_factor_product([LinearFactor(1.0, 2), LinearFactor(0.0, -2)], 1)
