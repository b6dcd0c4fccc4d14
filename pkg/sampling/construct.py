"""
Sampling Functions - Smearing Functions of Composite Fields
===========================================================

f(s) = int ds' K(s' - i0) C(s' - i0) conj(g(s + s'/2)) g(s - s'/2)

Construction paths:

    spectral_wigner   (1/2 pi) int dK~(p) W_g(s, -p) for kernels with a spectral form
    direct_integral   2 cos(beta pi/2) int_0^A s'^beta r(s, s') ds'           beta > -1
    finite_part       Hadamard finite part with even Taylor subtraction      beta < -1
    delta_derivative  (-1)^k pi/(2k)! d^{2k} r(s, 0)                         beta = -(2k+1)
    smooth_direct     trapezoid rule in s' against a smooth kernel
    boundary_epsilon  row-by-row regularized boundary values
"""

from dataclasses import dataclass
from math import factorial, floor
from typing import Callable, Optional, Tuple

import numpy as np

from kernels.boundary import eval_boundary
from kernels.kernel import HomogeneousKernel, Kernel, SmoothKernel, kernel_product_spectrum
from kernels.measures import SpectralMeasure
from numerics.quadrature import integrate_with_error
from numerics.spectral import SampledFunction, nonuniform_transform, transform_noise_floor
from sampling.wigner import DiamondRows, diamond_rows, s_grid
from testfn.diamond import DiamondProduct
from testfn.functions import FunctionProfile, TestFunction
from utils.config import get_settings
from utils.errors import PreconditionError, SpectralFormUnavailable, SpectralTruncationError
from utils.logger import setup_logger
from utils.parallel import ordered_map

logger = setup_logger('sampling')

METHODS = ('direct_integral', 'finite_part', 'delta_derivative', 'spectral_wigner',
           'smooth_direct', 'boundary_epsilon')


@dataclass(frozen=True)
class SamplingFunction:
    values: SampledFunction
    method: str
    error_estimate: float
    beta: Optional[float] = None
    support: Tuple[float, float] = (-np.inf, np.inf)

    @property
    def s(self) -> np.ndarray:
        return self.values.grid

    @property
    def samples(self) -> np.ndarray:
        return self.values.samples

    @property
    def real(self) -> np.ndarray:
        return np.real(self.values.samples)

    @property
    def imag_residual(self) -> float:
        """max |Im f| relative to max |f|"""
        scale = max(np.max(np.abs(self.samples)), 1e-300)
        return float(np.max(np.abs(np.imag(self.samples))) / scale)

    def integral(self) -> complex:
        """int f ds by the trapezoid rule on the sampling grid"""
        samples = self.samples
        step = self.values.grid_step
        return complex(step * (samples.sum() - 0.5 * (samples[0] + samples[-1])))

    def scaled(self, factor: complex) -> 'SamplingFunction':
        values = SampledFunction(factor * self.samples, self.values.grid_start, self.values.grid_step)
        return SamplingFunction(values, self.method, abs(factor) * self.error_estimate, self.beta, self.support)


def _package(s: np.ndarray, samples: np.ndarray, method: str, error: float, g: TestFunction,
             beta: Optional[float] = None) -> SamplingFunction:
    step = float(s[1] - s[0]) if s.size > 1 else 1.0
    values = SampledFunction(np.asarray(samples, dtype=complex), float(s[0]), step)
    return SamplingFunction(values, method, float(error), beta, g.support)


def pair_rows_spectral(measure: SpectralMeasure, data: DiamondRows, row_factor: Optional[np.ndarray] = None
                       ) -> Tuple[np.ndarray, float]:
    """(1/2 pi) int dK~(p) sum_n w_n rows[:, n] e^{-ip s'_n}, with rows optionally multiplied by row_factor(s')"""
    rows = data.rows if row_factor is None else data.rows * row_factor[None, :]
    if measure.is_zero:
        return np.zeros(data.s.size, dtype=complex), 0.0
    p_limit = get_settings().numerics.spectral.max_frequency_factor * data.nyquist
    reach = max(data.sprime[-1], 1e-6)

    def integrand(p):
        return nonuniform_transform(rows, data.sprime, data.weights, p, sign=-1.0)

    def floor(p):
        return transform_noise_floor(rows, data.sprime, data.weights, p)

    result = measure.integrate(integrand, panel_width=np.pi / reach, p_limit=p_limit, noise_floor=floor)
    return result.values / (2 * np.pi), float(np.max(result.error)) / (2 * np.pi)


def _spectral_with_refinement(measure: SpectralMeasure, g: TestFunction, s: np.ndarray,
                              row_factor: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                              attempts: int = 3) -> Tuple[np.ndarray, float]:
    n_sprime = get_settings().numerics.spectral.dft_points
    for attempt in range(attempts):
        data = diamond_rows(g, s, n_sprime)
        factor = None if row_factor is None else np.asarray(row_factor(data.sprime))
        try:
            return pair_rows_spectral(measure, data, factor)
        except SpectralTruncationError:
            if attempt == attempts - 1:
                raise
            n_sprime = 2 * n_sprime - 1
            logger.warning(f"Refining the s' grid to {n_sprime} points to resolve the spectral tail")


def sampling_spectral(kernel: Kernel, g: TestFunction, s: Optional[np.ndarray] = None) -> SamplingFunction:
    """
    f(s) = (1/2 pi) int dK~(p) W_g(s, -p)

    Raises:
        SpectralFormUnavailable: the kernel has no spectral form; homogeneous
            kernels with beta >= 0 go through sampling_homogeneous
    """
    try:
        measure = kernel.spectral
    except SpectralFormUnavailable as exc:
        raise SpectralFormUnavailable(f"{exc}; use sampling_homogeneous for real g instead") from exc
    s = s_grid(g) if s is None else np.asarray(s, dtype=float)
    logger.info(f"Constructing sampling function via spectral_wigner for {kernel.label}")
    values, error = _spectral_with_refinement(measure, g, s)
    beta = kernel.beta if isinstance(kernel, HomogeneousKernel) else None
    return _package(s, values, 'spectral_wigner', error, g, beta)


def _odd_branch(beta: float) -> Optional[int]:
    """k with beta = -(2k+1) within the proximity window, else None"""
    window = get_settings().numerics.sampling.odd_integer_window
    k = int(round((-beta - 1) / 2))
    if k >= 0 and abs(beta + 2 * k + 1) <= window:
        if beta != -(2 * k + 1):
            logger.warning(f"beta={beta!r} is within {window:g} of -{2 * k + 1}; using the delta_derivative branch")
        return k
    return None


def _row_integrals(beta: float, prod: DiamondProduct, s: np.ndarray) -> Tuple[np.ndarray, float]:
    settings = get_settings().numerics
    max_order = settings.testfn.max_derivative
    half_widths = prod.half_width(s)
    subtract = max(0, floor((-beta - 1) / 2)) if beta < -1 else -1
    cos_factor = 2 * np.cos(beta * np.pi / 2)

    def one_row(index: int) -> Tuple[float, float]:
        a = float(half_widths[index])
        s0 = float(s[index])
        if a <= 0:
            return 0.0, 0.0

        def r(sp):
            return float(np.real(prod(s0, sp)))

        if subtract < 0:
            out = integrate_with_error(r, (0.0, a), weight='alg', wvar=(beta, 0.0), strict=False)
            return cos_factor * out.value, abs(cos_factor) * out.error

        n_sub = 2 * subtract + 2
        taylor = [float(np.real(prod.sprime_derivative(s0, 0.0, 2 * k))) / factorial(2 * k)
                  for k in range(subtract + 1)]
        tail_orders = [n_sub + 2 * j for j in range(4) if n_sub + 2 * j <= max_order]
        tail = [float(np.real(prod.sprime_derivative(s0, 0.0, n))) / factorial(n) for n in tail_orders]
        switch = settings.sampling.taylor_switch * a

        def remainder(sp):
            if sp < switch:
                return sum(c * sp ** (n - n_sub) for c, n in zip(tail, tail_orders))
            poly = sum(c * sp ** (2 * k) for k, c in enumerate(taylor))
            return (r(sp) - poly) / sp ** n_sub

        exponent = beta + n_sub
        out = integrate_with_error(remainder, (0.0, a), weight='alg', wvar=(exponent, 0.0), strict=False)
        boundary = sum(c * a ** (beta + 2 * k + 1) / (beta + 2 * k + 1) for k, c in enumerate(taylor))
        return cos_factor * (out.value + boundary), abs(cos_factor) * out.error

    results = ordered_map(one_row, range(s.size), desc='sampling rows')
    values = np.array([v for v, _ in results])
    error = max((e for _, e in results), default=0.0)
    return values, error


def sampling_homogeneous(beta: float, g: TestFunction, s: Optional[np.ndarray] = None,
                         amplitude: complex = 1.0) -> SamplingFunction:
    """
    Closed-form sampling function of amplitude * (i(s' - i0))^beta for real g

    Raises:
        PreconditionError: g is complex valued
    """
    if not g.real_valued:
        raise PreconditionError("sampling_homogeneous requires a real-valued test function")
    s = s_grid(g) if s is None else np.asarray(s, dtype=float)
    prod = DiamondProduct(g, g)

    k = _odd_branch(beta)
    if k is not None:
        logger.info(f"Constructing sampling function via delta_derivative branch (k={k})")
        derivative = np.real(prod.sprime_derivative(s, np.zeros_like(s), 2 * k))
        values = (-1) ** k * np.pi / factorial(2 * k) * derivative
        return _package(s, amplitude * values, 'delta_derivative', 0.0, g, beta)

    method = 'direct_integral' if beta > -1 else 'finite_part'
    logger.info(f"Constructing sampling function via {method} branch (beta={beta:g})")
    values, error = _row_integrals(beta, prod, s)
    return _package(s, amplitude * values, method, abs(amplitude) * error, g, beta)


def _smooth_rows(func: Callable[[np.ndarray], np.ndarray], g: TestFunction, s: np.ndarray) -> np.ndarray:
    data = diamond_rows(g, s)
    kernel_values = np.broadcast_to(np.asarray(func(data.sprime)), data.sprime.shape)
    return (data.rows * kernel_values[None, :]) @ data.weights


def _boundary_rows(kernel: Kernel, g: TestFunction, s: np.ndarray,
                   fold: Optional[Callable[[np.ndarray], np.ndarray]] = None) -> Tuple[np.ndarray, float]:
    prod = DiamondProduct(g.conj(), g)
    half_widths = prod.half_width(s)

    def one_row(index: int) -> Tuple[complex, float]:
        a = float(half_widths[index])
        if a <= 0:
            return 0.0, 0.0
        s0 = float(s[index])
        if fold is None:
            row = lambda sp, s0=s0: prod(s0, sp)
        else:
            row = lambda sp, s0=s0: prod(s0, sp) * fold(sp)
        profile = FunctionProfile(row, center=0.0, radius=a, real_valued=False)
        out = eval_boundary(kernel, profile, method='epsilon')
        return out.value, out.error

    results = ordered_map(one_row, range(s.size), desc='boundary rows')
    return np.array([v for v, _ in results]), max((e for _, e in results), default=0.0)


def sample_kernel(kernel: Kernel, g: TestFunction, s: Optional[np.ndarray] = None) -> SamplingFunction:
    """Sampling function of a single kernel, choosing the construction path from its variant"""
    s = s_grid(g) if s is None else np.asarray(s, dtype=float)
    beta = kernel.beta if isinstance(kernel, HomogeneousKernel) else None
    if kernel.is_zero:
        return _package(s, np.zeros(s.size), 'spectral_wigner', 0.0, g, beta)
    if isinstance(kernel, SmoothKernel):
        logger.info(f"Constructing sampling function via smooth_direct for {kernel.label}")
        return _package(s, _smooth_rows(kernel.evaluate, g, s), 'smooth_direct', 0.0, g)
    if kernel.has_spectral_form:
        return sampling_spectral(kernel, g, s)
    if isinstance(kernel, HomogeneousKernel) and g.real_valued:
        return sampling_homogeneous(kernel.beta, g, s, amplitude=kernel.amplitude)
    logger.info(f"Constructing sampling function via boundary_epsilon for {kernel.label}")
    values, error = _boundary_rows(kernel, g, s)
    return _package(s, values, 'boundary_epsilon', error, g, beta)


def sampling_general(kernel: Kernel, coefficient: Kernel, g: TestFunction,
                     s: Optional[np.ndarray] = None) -> SamplingFunction:
    """
    f(s) = int ds' K(s' - i0) C(s' - i0) (conj g <> g)(s, s')

    Args:
        kernel: K
        coefficient: C, the OPE coefficient distribution
        g: test function

    Raises:
        PreconditionError: neither a spectral product nor a smooth factor is available
    """
    s = s_grid(g) if s is None else np.asarray(s, dtype=float)
    if kernel.is_zero or coefficient.is_zero:
        return _package(s, np.zeros(s.size), 'spectral_wigner', 0.0, g)

    for outer, smooth in ((kernel, coefficient), (coefficient, kernel)):
        if not isinstance(smooth, SmoothKernel):
            continue
        constant = smooth.constant
        if constant is not None:
            return sample_kernel(outer, g, s).scaled(constant)
        if isinstance(outer, SmoothKernel):
            values = _smooth_rows(lambda x: outer.evaluate(x) * smooth.evaluate(x), g, s)
            return _package(s, values, 'smooth_direct', 0.0, g)
        if outer.has_spectral_form:
            logger.info(f"Folding {smooth.label} into the rows of {outer.label}")
            values, error = _spectral_with_refinement(outer.spectral, g, s, row_factor=smooth.evaluate)
            return _package(s, values, 'spectral_wigner', error, g)
        values, error = _boundary_rows(outer, g, s, fold=smooth.evaluate)
        return _package(s, values, 'boundary_epsilon', error, g)

    try:
        measure = kernel_product_spectrum(kernel, coefficient)
    except SpectralFormUnavailable as exc:
        raise PreconditionError(
            f"no representable product of a {kernel.variant} kernel and a {coefficient.variant} kernel: "
            f"a spectral form for both or a smooth factor is required") from exc
    logger.info(f"Constructing sampling function via spectral product of {kernel.label} and {coefficient.label}")
    values, error = _spectral_with_refinement(measure, g, s)
    return _package(s, values, 'spectral_wigner', error, g)
