"""
Tests for spectral measures, kernels, boundary pairings and positive-type screening
"""

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import random_bump
from kernels import (
    PositivityStatus, analytic_kernel, boundary_bound, convolve_measures, eval_boundary,
    free_field_kernel, free_field_spectral_density, homogeneous_kernel, homogeneous_measure,
    is_positive_type, kernel_product_spectrum, knorm_estimate, knorm_product_check, smooth_kernel,
)
from testfn.functions import Gaussian
from testfn.norms import sobolev_norm
from utils.errors import (
    KernelEvaluationError, PreconditionError, SpectralFormUnavailable, SpectralTruncationError,
)

P = np.array([0.25, 1.0, 2.5, 7.0])


class TestMeasures:
    def test_homogeneous_beta_minus_one_is_flat(self):
        np.testing.assert_allclose(homogeneous_measure(-1.0).values(P), 2 * np.pi, rtol=1e-14)

    def test_homogeneous_beta_minus_two_is_linear(self):
        np.testing.assert_allclose(homogeneous_measure(-2.0).values(P), 2 * np.pi * P, rtol=1e-14)

    def test_homogeneous_needs_negative_beta(self):
        with pytest.raises(PreconditionError):
            homogeneous_measure(0.5)

    def test_homogeneous_cumulative_matches_density(self):
        measure = homogeneous_measure(-1.5)
        expected = quad(lambda p: float(measure.density_at(np.array([p]))[0]), 0.0, 3.0)[0]
        assert measure.cumulative(3.0)[0] == pytest.approx(expected, rel=1e-8)

    def test_free_field_massless_density(self):
        np.testing.assert_allclose(free_field_spectral_density(0.0).values(P), P / (4 * np.pi ** 2), rtol=1e-14)

    def test_free_field_vanishes_below_mass(self):
        np.testing.assert_array_equal(free_field_spectral_density(1.0).values(np.array([0.2, 0.5, 1.0])), 0.0)

    def test_free_field_cumulative(self):
        measure = free_field_spectral_density(1.0)
        expected = quad(lambda w: np.sqrt(w * w - 1.0) / (4 * np.pi ** 2), 1.0, 3.0)[0]
        assert measure.cumulative(3.0)[0] == pytest.approx(expected, rel=1e-10)
        assert free_field_spectral_density(0.0).cumulative(2.0)[0] == pytest.approx(4 / (8 * np.pi ** 2))

    def test_negative_mass_raises(self):
        with pytest.raises(PreconditionError):
            free_field_spectral_density(-0.1)

    def test_convolution_of_flat_densities(self):
        # (1/2pi)(2pi theta * 2pi theta)(p) = 2pi p, the spectrum of (i(s-i0))^-2
        product = convolve_measures(homogeneous_measure(-1.0), homogeneous_measure(-1.0))
        np.testing.assert_allclose(product.values(P), 2 * np.pi * P, rtol=1e-10)

    def test_product_spectrum_matches_homogeneous(self):
        product = kernel_product_spectrum(homogeneous_kernel(-1.0), homogeneous_kernel(-1.5))
        expected = homogeneous_measure(-2.5).values(P)
        np.testing.assert_allclose(product.values(P), expected, rtol=1e-8)

    def test_constant_kernel_acts_as_identity(self):
        product = kernel_product_spectrum(smooth_kernel('1'), homogeneous_kernel(-1.0))
        np.testing.assert_allclose(product.values(P), 2 * np.pi, rtol=1e-14)

    def test_atom_times_atom(self):
        product = kernel_product_spectrum(smooth_kernel('2'), smooth_kernel('3'))
        assert product.density is None
        (location, weight), = product.atoms
        assert location == 0.0
        assert complex(product.scale) * weight == pytest.approx(6 * 2 * np.pi)

    def test_zero_factor(self):
        zero = homogeneous_kernel(-1.0, 0.0)
        assert kernel_product_spectrum(zero, homogeneous_kernel(-2.0)).is_zero

    def test_growth_limit(self):
        with pytest.raises(SpectralTruncationError):
            convolve_measures(homogeneous_measure(-1.0), homogeneous_measure(-1.0), max_growth=1.5)

    def test_noise_floor_ends_the_march(self):
        # int e^{-p} 2 pi p^1.5 / Gamma(2.5) dp = 2 pi; the constant offset mimics roundoff
        measure = homogeneous_measure(-2.5)

        def func(p):
            return np.exp(-p) + 1e-12

        with pytest.raises(SpectralTruncationError):
            measure.integrate(func, panel_width=1.0, p_limit=200.0, tol=1e-10)
        result = measure.integrate(func, panel_width=1.0, p_limit=200.0, tol=1e-10,
                                   noise_floor=lambda p: np.full_like(p, 1e-12))
        assert result.p_max < 200.0
        assert result.error[0] > 0
        assert abs(result.values[0] - 2 * np.pi) <= result.error[0]


class TestKernels:
    def test_homogeneous_describe(self):
        described = homogeneous_kernel(-2.0, 0.5).describe()
        assert described == {'type': 'homogeneous', 'beta': -2.0, 'amplitude': [0.5, 0.0]}

    def test_polynomial_homogeneous_has_no_spectrum(self):
        with pytest.raises(SpectralFormUnavailable):
            homogeneous_kernel(2.0).spectral

    def test_homogeneous_evaluate(self):
        z = np.array([-0.5j, 1.0 - 1.0j])
        np.testing.assert_allclose(homogeneous_kernel(-1.0).evaluate(z), 1.0 / (1j * z), rtol=1e-14)

    def test_free_field_on_imaginary_axis(self):
        # Delta_+(-iy) = 1 / (4 pi^2 y^2) for the massless field
        value = free_field_kernel(0.0).evaluate(np.array([-0.5j]))[0]
        assert value.real == pytest.approx(1 / (4 * np.pi ** 2 * 0.25), rel=1e-6)
        assert abs(value.imag) < 1e-8

    def test_smooth_constant(self):
        kernel = smooth_kernel('2.5')
        assert kernel.constant == 2.5
        np.testing.assert_allclose(kernel.evaluate(np.linspace(-1, 1, 5)), 2.5)

    def test_smooth_rejects_other_symbols(self):
        with pytest.raises(PreconditionError):
            smooth_kernel('s + x')

    def test_analytic_kernel(self):
        kernel = analytic_kernel('1/z')
        assert kernel.evaluate(np.array([-1j]))[0] == pytest.approx(1j)
        assert kernel.singular_points == (0.0,)

    def test_analytic_kernel_parse_errors(self):
        with pytest.raises(PreconditionError):
            analytic_kernel('1/(z')
        with pytest.raises(PreconditionError):
            analytic_kernel('z + w')


class TestBoundary:
    def test_inverse_kernel_picks_up_delta(self, bump):
        # 1/(i(s - i0)) = -i P(1/s) + pi delta(s); the principal part drops for an even bump
        value = eval_boundary(homogeneous_kernel(-1.0), bump, method='spectral')
        assert value.method == 'spectral'
        assert value.value.real == pytest.approx(np.pi * np.exp(-1.0), rel=1e-6)
        assert abs(value.value.imag) < 1e-7

    def test_epsilon_path_agrees(self, bump):
        value = eval_boundary(homogeneous_kernel(-1.0), bump, method='epsilon')
        assert value.method == 'epsilon'
        assert value.value.real == pytest.approx(np.pi * np.exp(-1.0), rel=1e-5)
        assert abs(value.value.imag) < 1e-5

    def test_constant_kernel_integrates(self, bump):
        direct = eval_boundary(smooth_kernel('1'), bump)
        spectral = eval_boundary(smooth_kernel('1'), bump, method='spectral')
        assert direct.method == 'direct'
        assert direct.value.real == pytest.approx(0.443993816168, rel=1e-8)
        assert spectral.value.real == pytest.approx(direct.value.real, rel=1e-8)

    def test_zero_kernel(self, bump):
        value = eval_boundary(homogeneous_kernel(-1.0, 0.0), bump)
        assert value.value == 0.0
        assert value.method == 'trivial'

    def test_preconditions(self, bump):
        with pytest.raises(PreconditionError):
            eval_boundary(homogeneous_kernel(-1.0), bump, method='fourier')
        with pytest.raises(PreconditionError):
            eval_boundary(homogeneous_kernel(-1.0), Gaussian(0.5))
        with pytest.raises(PreconditionError):
            eval_boundary(homogeneous_kernel(-1.0), bump, method='direct')


class TestKNorm:
    def test_inverse_z(self):
        estimate = knorm_estimate(analytic_kernel('1/z'), 1.0)
        assert estimate.value == pytest.approx(1.0, rel=1e-12)
        assert not estimate.unbounded

    def test_constant(self):
        assert knorm_estimate(smooth_kernel('-2'), 1.0).value == pytest.approx(2.0)

    def test_too_singular_is_flagged(self):
        assert knorm_estimate(analytic_kernel('1/z**2'), 1.0).unbounded

    def test_nonpositive_ell(self):
        with pytest.raises(PreconditionError):
            knorm_estimate(analytic_kernel('1/z'), 0.0)

    def test_singular_on_grid_raises(self):
        # pole at z = -i sits on the sampled grid
        with pytest.raises(KernelEvaluationError):
            knorm_estimate(analytic_kernel('1/(z + I)', ()), 1.0)


class TestBoundaryBound:
    def test_unit_values(self):
        assert boundary_bound(0, 1.0, 1.0, 1.0) == 96.0

    def test_zero_norm(self):
        assert boundary_bound(2, 0.5, 0.0, 3.0) == 0.0

    def test_invalid(self):
        with pytest.raises(PreconditionError):
            boundary_bound(1, 0.0, 1.0, 1.0)
        with pytest.raises(PreconditionError):
            boundary_bound(-1, 1.0, 1.0, 1.0)

    @pytest.mark.slow
    def test_bounds_inverse_z_pairing(self, rng):
        kernel = analytic_kernel('1/z')
        knorm = knorm_estimate(kernel, 1.0).value
        for _ in range(10):
            g = random_bump(rng)
            d = max(abs(x) for x in g.support)
            pairing = eval_boundary(kernel, g).value
            assert abs(pairing) <= boundary_bound(1, d, knorm, sobolev_norm(g, d, 3))


class TestKNormProduct:
    @pytest.mark.parametrize('second', ['1/z', 'exp(z)'])
    def test_submultiplicative(self, second):
        lhs, rhs = knorm_product_check(analytic_kernel('1/z'), analytic_kernel(second), 1.0, 1.0)
        assert lhs > 0
        assert lhs <= rhs * (1 + 1e-12)

    def test_inverse_square_is_attained(self):
        # |1/z^2| y^2 and (|1/z| y)^2 both peak at 1 on the imaginary axis
        lhs, rhs = knorm_product_check(analytic_kernel('1/z'), analytic_kernel('1/z'), 1.0, 1.0)
        assert lhs == pytest.approx(rhs, rel=1e-12)


class TestPositiveType:
    def test_homogeneous_certified(self):
        assert is_positive_type(homogeneous_kernel(-1.5)).status is PositivityStatus.CERTIFIED_POSITIVE

    def test_negative_amplitude_refuted(self):
        assert is_positive_type(homogeneous_kernel(-1.5, -2.0)).status is PositivityStatus.CERTIFIED_NOT

    def test_free_field_certified(self):
        assert is_positive_type(free_field_kernel(1.0)).is_positive

    def test_zero_kernel_certified(self):
        assert is_positive_type(homogeneous_kernel(3.0, 0.0)).is_positive

    def test_odd_polynomial_refuted(self):
        certificate = is_positive_type(smooth_kernel('s'), seed=3)
        assert certificate.status is PositivityStatus.CERTIFIED_NOT
        assert certificate.witness_value is not None

    def test_gaussian_not_refuted(self):
        certificate = is_positive_type(smooth_kernel('exp(-s**2)'), seed=3)
        assert certificate.status is PositivityStatus.UNKNOWN
