"""
Tests for positivity certificates of homogeneous sampling functions
"""

import numpy as np
import pytest

from conftest import random_bump
from kernels import homogeneous_kernel
from positivity import (
    CertificateRule, CertificateStatus, average_positivity, certificate_table, certify, certify_pointwise,
    garding_scan, hudson_negativity, is_log_concave, spectral_average,
)
from sampling import sample_kernel
from testfn.functions import Gaussian, MollifiedPolynomial, StandardBump, Sum, derivative, shift
from utils.errors import PreconditionError


@pytest.fixture
def two_bumps():
    return Sum((shift(StandardBump(0.3), -0.6), shift(StandardBump(0.3), 0.6)))


@pytest.fixture
def complex_g(bump):
    return Sum([bump, shift(StandardBump(0.6), 0.2)], [1.0, 0.7j])


class TestLogConcavity:
    def test_bump(self, bump):
        assert is_log_concave(bump)
        assert is_log_concave(StandardBump(0.4, center=0.3))

    def test_polynomial_weight_breaks_it(self):
        # log(1 + 4x^2) is convex at 0 strongly enough to win
        assert not is_log_concave(MollifiedPolynomial([1.0, 0.0, 4.0]))

    def test_sign_change_rejected(self, bump):
        with pytest.raises(PreconditionError):
            is_log_concave(derivative(bump, 1))

    def test_disconnected_support_rejected(self, two_bumps):
        with pytest.raises(PreconditionError, match='interval'):
            is_log_concave(two_bumps)


class TestPointwise:
    def test_rule_beta_range(self, bump):
        certificate = certify_pointwise(-0.5, bump)
        assert certificate.status is CertificateStatus.CERTIFIED_POINTWISE
        assert certificate.rule is CertificateRule.BETA_RANGE
        assert certificate.min_value >= -1e-10 * certificate.max_abs

    def test_rule_beta_minus_one(self, bump):
        certificate = certify_pointwise(-1.0, derivative(bump, 1))
        assert certificate.rule is CertificateRule.BETA_MINUS_ONE

    def test_rule_log_concave(self, bump):
        certificate = certify_pointwise(-2.0, bump)
        assert certificate.rule is CertificateRule.LOG_CONCAVE
        assert certificate.certified

    def test_separated_bumps_go_negative(self, two_bumps):
        certificate = certify_pointwise(-2.0, two_bumps)
        assert certificate.status is CertificateStatus.NOT_CERTIFIED
        assert certificate.min_value < 0
        assert certificate.witness is not None
        assert not certificate.counterexample_candidate

    def test_growing_kernel_not_certified(self, bump):
        certificate = certify(2.0, bump)
        assert certificate.status is CertificateStatus.NOT_CERTIFIED


class TestAverage:
    def test_average_fallback(self, two_bumps):
        certificate = certify(-2.0, two_bumps)
        assert certificate.status is CertificateStatus.CERTIFIED_AVERAGE
        assert certificate.rule is CertificateRule.AVERAGE
        assert certificate.min_value < 0

    def test_average_matches_spectral_side(self, two_bumps):
        average = average_positivity(-2.0, two_bumps)
        assert average > 0
        assert average == pytest.approx(spectral_average(-2.0, two_bumps), rel=1e-4)

    def test_positive_beta_rejected(self, bump):
        with pytest.raises(PreconditionError):
            average_positivity(0.5, bump)

    @pytest.mark.slow
    @pytest.mark.parametrize('beta', [-0.5, -2.0])
    def test_spectral_identity_on_random_bumps(self, rng, beta):
        for _ in range(10):
            g = random_bump(rng)
            assert average_positivity(beta, g) == pytest.approx(spectral_average(beta, g), rel=1e-8)

    @pytest.mark.slow
    @pytest.mark.parametrize('beta', [-0.5, -1.0, -2.5])
    def test_nonnegative_on_random_complex_g(self, rng, beta):
        for _ in range(10):
            g = Sum([random_bump(rng), random_bump(rng, center_range=(-0.5, 0.5))],
                    [1.0, complex(rng.normal(), rng.normal())])
            f = sample_kernel(homogeneous_kernel(beta), g)
            assert average_positivity(beta, g) >= -1e-10 * np.max(np.abs(f.samples))

    def test_complex_g_steep_kernel(self, complex_g):
        average = average_positivity(-2.5, complex_g)
        assert average > 0
        assert average == pytest.approx(spectral_average(-2.5, complex_g), rel=1e-4)
        certificate = certify(-2.5, complex_g)
        assert certificate.status is CertificateStatus.CERTIFIED_AVERAGE


class TestGarding:
    def test_nonnegative_family(self, bump):
        family = [StandardBump(0.5, center=c) for c in (-0.3, 0.0, 0.3)]
        c_hat, table = garding_scan(-1.0, bump, family)
        assert c_hat == 0.0
        assert len(table) == 3
        assert (table['chi_pairing'] > 0).all()

    def test_preconditions(self, bump):
        with pytest.raises(PreconditionError):
            garding_scan(0.5, bump, [bump])
        with pytest.raises(PreconditionError):
            garding_scan(-1.0, bump, [])

    def test_complex_family_steep_kernel(self, bump, complex_g):
        c_hat, table = garding_scan(-2.5, bump, [complex_g])
        assert c_hat >= 0.0
        assert len(table) == 1
        assert table['l2_squared'].iloc[0] > 0


class TestHudson:
    def test_interference_is_negative(self, two_bumps):
        result = hudson_negativity(two_bumps)
        assert result.relative < -0.1
        assert abs(result.location[0]) < 0.1

    def test_gaussian_is_diagnostic_only(self):
        result = hudson_negativity(Gaussian(0.3))
        assert result.max_value > 0


def test_certificate_table(bump):
    table = certificate_table([certify_pointwise(-0.5, bump), certify_pointwise(-2.0, bump)])
    assert list(table['rule']) == ['beta_range_i', 'log_concave_iii']
    assert set(table.columns) >= {'status', 'beta', 'min_value', 'max_abs'}
