import numpy as np
import pytest

from numerics.extrapolation import extrapolate_to_zero
from numerics.quadrature import composite_nodes, gauss_legendre_integrate, integrate, integrate_with_error
from numerics.spectral import (
    SampledFunction, inverse_transform, nonuniform_transform, spectral_transform, transform_noise_floor,
)
from testfn.functions import StandardBump
from utils.errors import PreconditionError


def bump_values(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1
    out[inside] = np.exp(-1.0 / (1.0 - t[inside] ** 2))
    return out


class TestIntegrate:

    def test_constant(self):
        assert integrate(lambda t: 1.0, (0.0, 1.0)) == pytest.approx(1.0, abs=1e-14)

    def test_bump_two_rules_agree(self):
        adaptive = integrate(lambda t: float(bump_values(np.array([t]))[0]), (-1.0, 1.0))
        fixed = gauss_legendre_integrate(bump_values, (-1.0, 1.0), panels=128, order=32)
        assert abs(adaptive - fixed) < 1e-10
        assert adaptive == pytest.approx(0.443993816168, rel=1e-9)

    def test_odd_integrand_vanishes(self):
        value = integrate(lambda t: t * float(bump_values(np.array([t]))[0]), (-1.0, 1.0))
        assert abs(value) < 1e-12

    def test_complex_integrand(self):
        out = integrate_with_error(lambda t: np.exp(1j * t), (0.0, np.pi))
        assert out.value == pytest.approx(2j, abs=1e-12)
        assert out.error < 1e-9

    def test_linearity(self, rng):
        a, b = rng.normal(size=2)
        f = lambda t: np.sin(3 * t) * np.exp(-t)
        g = lambda t: np.cos(t) ** 2
        lhs = integrate(lambda t: a * f(t) + b * g(t), (0.0, 2.0))
        rhs = a * integrate(f, (0.0, 2.0)) + b * integrate(g, (0.0, 2.0))
        assert abs(lhs - rhs) <= 2e-10

    def test_reversed_interval_rejected(self):
        with pytest.raises(PreconditionError):
            integrate(lambda t: 1.0, (1.0, 0.0))


class TestSpectralTransform:

    def gaussian(self, n=4096):
        return SampledFunction.from_callable(lambda t: np.exp(-t ** 2 / 2), -8.0, 8.0, n)

    def test_gaussian_closed_form(self):
        spectrum = spectral_transform(self.gaussian())
        u = spectrum.frequencies
        window = np.abs(u) <= 10
        expected = np.sqrt(2 * np.pi) * np.exp(-u[window] ** 2 / 2)
        assert np.max(np.abs(spectrum.amplitudes[window] - expected)) < 1e-8
        assert not spectrum.aliasing

    def test_zero_function(self):
        spectrum = spectral_transform(SampledFunction(np.zeros(64), -1.0, 2.0 / 63))
        assert np.all(spectrum.amplitudes == 0)

    def test_frequencies_increasing(self):
        spectrum = spectral_transform(self.gaussian(256))
        assert np.all(np.diff(spectrum.frequencies) > 0)

    def test_parseval(self, rng):
        t = np.linspace(-3, 3, 2049)
        step = t[1] - t[0]
        for _ in range(20):
            centers = rng.uniform(-1.5, 1.5, size=3)
            amps = rng.normal(size=3)
            samples = sum(a * bump_values(t - c) for a, c in zip(amps, centers))
            spectrum = spectral_transform(SampledFunction(samples, t[0], step))
            d_omega = spectrum.frequencies[1] - spectrum.frequencies[0]
            lhs = np.sum(np.abs(spectrum.amplitudes) ** 2) * d_omega
            rhs = 2 * np.pi * step * np.sum(np.abs(samples) ** 2)
            assert lhs == pytest.approx(rhs, rel=1e-8)

    def test_shift_theorem(self):
        a = 0.75
        t = np.linspace(-4, 4, 1025)
        step = t[1] - t[0]
        plain = spectral_transform(SampledFunction(bump_values(t), t[0], step))
        shifted = spectral_transform(SampledFunction(bump_values(t - a), t[0], step))
        u = plain.frequencies
        window = np.abs(u) < 20
        expected = plain.amplitudes[window] * np.exp(1j * u[window] * a)
        assert np.max(np.abs(shifted.amplitudes[window] - expected)) < 1e-6

    def test_round_trip(self):
        f = self.gaussian(512)
        back = inverse_transform(spectral_transform(f))
        assert np.max(np.abs(back.samples - f.samples)) < 1e-9

    def test_padding_must_be_positive(self):
        with pytest.raises(PreconditionError):
            spectral_transform(self.gaussian(64), padding_factor=0)

    def test_support_declaration_checked(self):
        t = np.linspace(-1, 1, 11)
        with pytest.raises(PreconditionError):
            SampledFunction(np.ones(11), t[0], t[1] - t[0], support_radius=1.0)


def test_nonuniform_transform_matches_closed_form():
    g = StandardBump(1.0)
    nodes, weights = composite_nodes(np.linspace(-1.0, 1.0, 33), 16)
    u = np.array([0.0, 1.0, 5.0])
    out = nonuniform_transform(g(nodes), nodes, weights, u)
    assert out.shape == (1, 3)
    assert out[0, 0].real == pytest.approx(0.443993816168, rel=1e-6)
    # even function: transform is real
    assert np.max(np.abs(out.imag)) < 1e-12


def test_transform_noise_floor_grows_with_frequency():
    g = StandardBump(1.0)
    nodes, weights = composite_nodes(np.linspace(-1.0, 1.0, 33), 16)
    rows = g(nodes)
    floor = transform_noise_floor(rows, nodes, weights, np.array([0.0, 100.0, 200.0]))
    mass = np.sum(np.abs(rows * weights))
    assert floor[0] == pytest.approx(np.finfo(float).eps * np.sqrt(nodes.size) * mass, rel=1e-12)
    np.testing.assert_allclose(np.diff(floor), floor[2] - floor[1], rtol=1e-12)


class TestExtrapolation:

    def test_linear(self):
        pairs = [(h, 3 + h) for h in (0.4, 0.2, 0.1)]
        result = extrapolate_to_zero(pairs)
        assert result.converged
        assert result.limit == pytest.approx(3.0, abs=1e-12)

    def test_quadratic(self):
        pairs = [(h, 1 + h + h * h) for h in (0.4, 0.2, 0.1, 0.05)]
        result = extrapolate_to_zero(pairs)
        assert abs(result.limit - 1.0) < 1e-6

    def test_single_pair_rejected(self):
        with pytest.raises(PreconditionError):
            extrapolate_to_zero([(0.1, 1.0)])

    def test_increasing_steps_rejected(self):
        with pytest.raises(PreconditionError):
            extrapolate_to_zero([(0.1, 1.0), (0.2, 1.0), (0.4, 1.0)])

    def test_non_monotone_residuals_flagged(self):
        pairs = [(0.4, 1.0), (0.2, 1.1), (0.1, 0.5), (0.05, 2.0)]
        result = extrapolate_to_zero(pairs)
        assert not result.converged
        assert result.limit == 2.0
