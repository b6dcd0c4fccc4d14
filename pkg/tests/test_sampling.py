"""
Tests for sampling functions and Wigner functions
"""

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import random_bump
from kernels import homogeneous_kernel, smooth_kernel
from sampling import (
    VacuumTwoPoint, quadratic_form, sample_kernel, sampling_general, sampling_homogeneous,
    sampling_spectral, wigner,
)
from sampling.quadratic import fourier_spline
from testfn.functions import Gaussian, StandardBump, Sum, shift
from utils.errors import PreconditionError

I_BUMP = 0.443993816168
S = np.linspace(-0.8, 0.8, 17)
BETAS = [-0.5, -1.0, -1.5, -2.0, -2.5, -3.0]


def bump_squared(t):
    return np.exp(-2.0 / (1.0 - t * t))


def bump_transform(p):
    """g~(p) of the unit bump by adaptive quadrature of the cosine transform"""
    return 2 * quad(lambda t: np.cos(p * t) * np.exp(-1.0 / (1.0 - t * t)), 0.0, 1.0,
                    epsabs=1e-13, epsrel=1e-12, limit=200)[0]


class TestHomogeneous:
    def test_inverse_kernel_is_pi_g_squared(self, bump):
        f = sampling_homogeneous(-1.0, bump, S)
        assert f.method == 'delta_derivative'
        np.testing.assert_allclose(f.real, np.pi * bump_squared(S), rtol=1e-12, atol=1e-300)

    def test_amplitude_scales(self, bump):
        f = sampling_homogeneous(-1.0, bump, S, amplitude=2.0)
        np.testing.assert_allclose(f.real, 2 * np.pi * bump_squared(S), rtol=1e-12)

    def test_branches(self, bump):
        assert sampling_homogeneous(-0.5, bump, S).method == 'direct_integral'
        assert sampling_homogeneous(-2.0, bump, S).method == 'finite_part'
        assert sampling_homogeneous(-3.0, bump, S).method == 'delta_derivative'

    def test_integral(self, bump):
        f = sampling_homogeneous(-1.0, bump)
        expected = np.pi * quad(bump_squared, -1.0, 1.0)[0]
        assert f.integral().real == pytest.approx(expected, rel=1e-8)

    def test_complex_g_rejected(self):
        with pytest.raises(PreconditionError, match='real-valued'):
            sampling_homogeneous(-1.0, StandardBump(1.0, amplitude=1j), S)


class TestSpectral:
    def test_matches_delta_branch(self, bump):
        spectral = sampling_spectral(homogeneous_kernel(-1.0), bump, S)
        assert spectral.method == 'spectral_wigner'
        scale = np.pi * np.exp(-2.0)
        np.testing.assert_allclose(spectral.real, np.pi * bump_squared(S), atol=1e-6 * scale)
        assert spectral.imag_residual < 1e-6

    @pytest.mark.parametrize('beta', BETAS)
    def test_branch_consistency(self, bump, beta):
        closed = sampling_homogeneous(beta, bump, S)
        spectral = sampling_spectral(homogeneous_kernel(beta), bump, S)
        scale = np.max(np.abs(closed.real))
        assert spectral.error_estimate < 1e-3 * scale
        atol = closed.error_estimate + spectral.error_estimate + 1e-8 * scale
        np.testing.assert_allclose(spectral.real, closed.real, rtol=0, atol=atol)

    @pytest.mark.parametrize('sign', [-1.0, 1.0])
    def test_continuity_at_minus_one(self, bump, sign):
        # |f_{-1+e} - pi g^2| <= C e, C fitted at e = 1e-2
        target = np.pi * bump_squared(S)

        def deviation(eps):
            return np.max(np.abs(sampling_spectral(homogeneous_kernel(-1.0 + sign * eps), bump, S).real - target))

        c_fit = deviation(1e-2) / 1e-2
        assert c_fit > 0
        assert deviation(1e-3) <= 12 * c_fit * 1e-3

    @pytest.mark.parametrize('beta', [-0.5, -1.5])
    def test_complex_g_gives_real_f(self, bump, beta):
        g = Sum([bump, shift(StandardBump(0.6), 0.2)], [1.0, 0.7j])
        f = sample_kernel(homogeneous_kernel(beta), g, S)
        assert f.imag_residual < 1e-9

    def test_steep_kernel_on_complex_g(self, bump):
        # spectral density grows like p^1.5; the roundoff floor ends the tail
        g = Sum([bump, shift(StandardBump(0.6), 0.2)], [1.0, 0.7j])
        f = sample_kernel(homogeneous_kernel(-2.5), g, S)
        scale = np.max(np.abs(f.samples))
        assert f.method == 'spectral_wigner'
        assert 0 < f.error_estimate < 1e-3 * scale
        assert f.imag_residual < 1e-6


class TestSampleKernel:
    def test_constant_kernel_integral(self, bump):
        # int ds int ds' g(s + s'/2) g(s - s'/2) = (int g)^2
        f = sample_kernel(smooth_kernel('1'), bump)
        assert f.method == 'smooth_direct'
        assert f.integral().real == pytest.approx(I_BUMP ** 2, rel=1e-6)

    def test_zero_kernel(self, bump):
        f = sample_kernel(homogeneous_kernel(-1.0, 0.0), bump, S)
        np.testing.assert_array_equal(f.samples, 0.0)

    def test_dispatch_to_spectral(self, bump):
        assert sample_kernel(homogeneous_kernel(-1.0), bump, S).method == 'spectral_wigner'

    def test_constant_coefficient_scales(self, bump):
        kernel = homogeneous_kernel(-1.0)
        plain = sample_kernel(kernel, bump, S)
        general = sampling_general(kernel, smooth_kernel('3'), bump, S)
        np.testing.assert_allclose(general.samples, 3 * plain.samples, rtol=1e-12)

    def test_product_spectrum_path(self, bump):
        # (i(s-i0))^-1 (i(s-i0))^-1 = (i(s-i0))^-2
        general = sampling_general(homogeneous_kernel(-1.0), homogeneous_kernel(-1.0), bump, S)
        direct = sampling_spectral(homogeneous_kernel(-2.0), bump, S)
        scale = np.max(np.abs(direct.real))
        np.testing.assert_allclose(general.real, direct.real, atol=1e-6 * scale)


class TestWigner:
    @pytest.fixture
    def w(self, bump):
        return wigner(bump)

    def test_real_and_symmetric(self, w):
        assert w.imag_residual < 1e-10
        scale = np.max(np.abs(w.values))
        np.testing.assert_allclose(w.values, w.values[:, ::-1], atol=1e-10 * scale)

    def test_p_marginal(self, w):
        # int dp/(2 pi) W(s, p) = |g(s)|^2
        expected = bump_squared(np.clip(w.s, -1 + 1e-12, 1 - 1e-12))
        np.testing.assert_allclose(w.p_marginal(), expected, rtol=0, atol=1e-6 * np.max(expected))

    def test_s_marginal(self, w):
        # int ds W(s, p) = |g~(p)|^2; the bump is even so g~ is a cosine transform
        zero = w.p.size // 2
        assert w.p[zero] == pytest.approx(0.0, abs=1e-12)
        assert w.s_marginal()[zero] == pytest.approx(I_BUMP ** 2, rel=1e-6)
        picks = np.arange(0, w.p.size, 16)
        expected = np.array([bump_transform(p) for p in w.p[picks]]) ** 2
        np.testing.assert_allclose(w.s_marginal()[picks], expected, rtol=0, atol=1e-6 * I_BUMP ** 2)

    def test_gaussian_is_nonnegative(self):
        w = wigner(Gaussian(0.5))
        assert np.min(w.values) >= -1e-9 * np.max(w.values)

    def test_frame_layout(self, w):
        frame = w.to_frame()
        assert list(frame.columns) == ['s', 'p', 'W']
        assert len(frame) == w.s.size * w.p.size


class TestQuadraticForm:
    def test_requires_positive_kernel(self, bump):
        with pytest.raises(PreconditionError, match='positive-type'):
            quadratic_form(smooth_kernel('s'), VacuumTwoPoint(0.0), bump)

    def test_zero_two_point(self, bump):
        assert quadratic_form(homogeneous_kernel(-1.0), VacuumTwoPoint(0.0, amplitude=0.0), bump) == 0.0

    @pytest.mark.slow
    def test_nonnegative_on_random_complex_g(self, rng):
        kernel = homogeneous_kernel(-1.0)
        data = VacuumTwoPoint(0.0)
        for _ in range(20):
            g = Sum([random_bump(rng), random_bump(rng)], [1.0, complex(rng.normal(), rng.normal())])
            assert quadratic_form(kernel, data, g) >= -1e-8

    def test_spline_cache_is_bounded(self, bump):
        assert fourier_spline.cache_info().maxsize == 16
        assert fourier_spline(bump) is fourier_spline(bump)
        assert VacuumTwoPoint(1.0).spline(bump) is fourier_spline(bump)
