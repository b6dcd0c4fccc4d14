"""
Tests for formal power series positivity and square roots
"""

import numpy as np
import pytest
import sympy as sp

from fps import FormalPowerSeries, fps_conj, fps_is_positive, fps_mul, fps_sqrt
from utils.errors import PreconditionError


def series(*coefficients, exact=True):
    return FormalPowerSeries.from_coefficients(list(coefficients), exact=exact)


class TestPositivity:
    def test_truncated_cosine(self):
        witness = fps_is_positive(series(1, 0, -0.5, 0, 0.0416667))
        assert witness.positive
        assert witness.n == 0
        assert witness.d0 == 1

    def test_leading_even_power(self):
        witness = fps_is_positive(series(0, 0, 2, 1))
        assert witness.positive
        assert witness.n == 1
        assert witness.d0 == 2

    def test_negative_constant(self):
        witness = fps_is_positive(series(-1, 1))
        assert not witness.positive
        assert witness.failing_index == 0

    def test_odd_leading_power(self):
        witness = fps_is_positive(series(0, 1, 5))
        assert not witness.positive
        assert witness.failing_index == 1

    def test_zero_series(self):
        assert fps_is_positive(series(0, 0, 0)).positive

    def test_float_mode_threshold(self):
        witness = fps_is_positive(series(1e-13, 0, 1, exact=False))
        assert witness.positive
        assert witness.n == 1

    def test_decimal_coefficients_kept_exact(self):
        assert series(0.1)[0] == sp.Rational(1, 10)


class TestSquareRoot:
    def test_perfect_square(self):
        root = fps_sqrt(series(1, 2, 1))
        assert root.equals(series(1, 1, 0))

    def test_binomial_coefficients(self):
        root = fps_sqrt(series(1, 1, 0, 0, 0))
        expected = [1, sp.Rational(1, 2), sp.Rational(-1, 8), sp.Rational(1, 16), sp.Rational(-5, 128)]
        assert list(root.coefficients) == expected

    def test_leading_power_is_halved(self):
        root = fps_sqrt(series(0, 0, 2, 1))
        assert root[0] == 0
        assert root[1] == sp.sqrt(2)
        assert (root * root).equals(series(0, 0, 2, 1))

    def test_not_positive_names_coefficient(self):
        with pytest.raises(PreconditionError, match='c_0'):
            fps_sqrt(series(-1, 1))
        with pytest.raises(PreconditionError, match='odd index'):
            fps_sqrt(series(0, 3))

    def test_zero_series_root(self):
        assert fps_sqrt(series(0, 0)).equals(series(0, 0))

    def test_float_mode(self):
        p = series(4.0, 1.0, -0.5, 0.25, exact=False)
        root = fps_sqrt(p)
        assert root[0] == pytest.approx(2.0)
        np.testing.assert_allclose(fps_mul(root, root).as_floats(), p.as_floats(), atol=1e-12)

    def test_positive_iff_square_root_exists(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            coefficients = [int(c) for c in rng.integers(-3, 4, size=5)]
            p = series(*coefficients)
            if fps_is_positive(p).positive:
                root = fps_sqrt(p)
                assert fps_mul(fps_conj(root), root).equals(p)
            else:
                with pytest.raises(PreconditionError):
                    fps_sqrt(p)


class TestArithmetic:
    def test_product_truncates(self):
        product = fps_mul(series(1, 1, 0), series(1, -1, 0))
        assert product.equals(series(1, 0, -1))

    def test_product_uses_smaller_order(self):
        assert fps_mul(series(1, 1, 1, 1), series(1, 1)).truncation_order == 1

    def test_conjugate(self):
        p = series(1, 1 + 2 * sp.I)
        assert fps_conj(p).equals(series(1, 1 - 2 * sp.I))

    def test_empty_series_raises(self):
        with pytest.raises(PreconditionError):
            FormalPowerSeries.from_coefficients([])
