"""
Positive Type - Bochner-Schwartz Certification
==============================================

A kernel is of positive type when int int K(t - u - i0) conj(g(t)) g(u) dt du >= 0
for every test function g. Structural certificates come from the spectral
measure; everything else goes through a randomized numerical screen that can
refute positivity but never prove it.
"""

from typing import Optional

import numpy as np
from scipy.linalg import toeplitz

from kernels.kernel import (
    HomogeneousKernel, Kernel, PositiveTypeCertificate, PositivityStatus, SmoothKernel,
)
from testfn.functions import bump_derivatives
from utils.config import get_settings
from utils.logger import setup_logger

logger = setup_logger('positive_type')


def kernel_gram_matrix(kernel: Kernel, t: np.ndarray, eps: float) -> np.ndarray:
    """M[n, m] = K(t_n - t_m - i eps) on a uniform grid, built from the 2N-1 distinct differences"""
    step = t[1] - t[0]
    lags = step * np.arange(t.size)
    column = kernel.evaluate(lags - 1j * eps)
    row = kernel.evaluate(-lags - 1j * eps)
    return toeplitz(column, row)


def quadratic_form(gram: np.ndarray, g: np.ndarray, step: float) -> complex:
    """step^2 sum_{n,m} M[n, m] conj(g_n) g_m"""
    return complex(step * step * np.conj(g) @ gram @ g)


def random_test_vectors(rng: np.random.Generator, t: np.ndarray, count: int) -> np.ndarray:
    """Bump-windowed random complex polynomials of degree <= 4, one per row"""
    degree = 5
    powers = np.vander(t, degree, increasing=True)
    coefficients = rng.normal(size=(count, degree)) + 1j * rng.normal(size=(count, degree))
    shifts = rng.uniform(-0.4, 0.4, size=count)
    widths = rng.uniform(0.3, 1.0, size=count)
    vectors = coefficients @ powers.T
    for i in range(count):
        x = (t - shifts[i]) / widths[i]
        vectors[i] *= bump_derivatives(x, 0)[0]
    return vectors


def _regularization(kernel: Kernel) -> float:
    if isinstance(kernel, SmoothKernel):
        return 0.0
    if isinstance(kernel, HomogeneousKernel) and kernel.beta >= 0:
        return 0.0
    return get_settings().numerics.sampling.positive_type_eps


def is_positive_type(kernel: Kernel, trials: Optional[int] = None, seed: Optional[int] = None,
                     grid_points: Optional[int] = None) -> PositiveTypeCertificate:
    """
    Classify a kernel as certified_positive, certified_not or unknown

    Structural certificates (spectral measure with positive prefactor, homogeneous
    kernels with beta < 0 and real amplitude) are exact. Otherwise the quadratic
    form is evaluated for random complex test vectors on [-1, 1]; a value with
    Re < -1e-8 scale or |Im| > 1e-8 scale refutes positivity.
    """
    preset = kernel.positive_type
    if preset is not None:
        return preset

    settings = get_settings().numerics
    trials = settings.sampling.positive_type_trials if trials is None else trials
    grid_points = settings.sampling.positive_type_grid if grid_points is None else grid_points
    rng = np.random.default_rng(settings.run.seed if seed is None else seed)

    t = np.linspace(-1.0, 1.0, grid_points)
    step = t[1] - t[0]
    eps = _regularization(kernel)
    gram = kernel_gram_matrix(kernel, t, eps)
    if not np.all(np.isfinite(gram)):
        logger.warning(f"Kernel '{kernel.label}' is not finite on the screening grid")
        return PositiveTypeCertificate(PositivityStatus.UNKNOWN, 'numeric screen', 'kernel not finite on grid')

    kernel_scale = max(np.max(np.abs(gram)), 1e-300)
    for g in random_test_vectors(rng, t, trials):
        q = quadratic_form(gram, g, step)
        scale = kernel_scale * step * np.sum(np.abs(g) ** 2) * (t[-1] - t[0])
        if q.real < -1e-8 * scale or abs(q.imag) > 1e-8 * scale:
            logger.info(f"Kernel '{kernel.label}' refuted: quadratic form {q:.6g}")
            return PositiveTypeCertificate(PositivityStatus.CERTIFIED_NOT, 'numeric screen',
                                           'quadratic form not nonnegative', witness_value=q)
    return PositiveTypeCertificate(PositivityStatus.UNKNOWN, 'numeric screen',
                                   f'no violation in {trials} trials (eps={eps:g})')
