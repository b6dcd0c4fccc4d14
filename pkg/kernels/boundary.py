"""
Boundary Values - Pairing Kernels with Test Functions
=====================================================

eval_boundary computes lim_{y->0+} int f(x) F(x - iy) dx. Spectral kernels are
paired on the Fourier side, smooth kernels by direct quadrature, and every
other kernel through the regularized integrals at y = 2^-k followed by
polynomial extrapolation to y = 0.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from kernels.kernel import Kernel, SmoothKernel
from numerics.extrapolation import extrapolate_to_zero
from numerics.quadrature import composite_nodes, integrate_with_error
from numerics.spectral import nonuniform_transform, transform_noise_floor
from testfn.functions import TestFunction
from utils.config import get_settings
from utils.errors import ExtrapolationError, KernelEvaluationError, PreconditionError
from utils.logger import setup_logger

logger = setup_logger('boundary')

_METHODS = ('auto', 'spectral', 'epsilon', 'direct')


@dataclass(frozen=True)
class BoundaryValue:
    value: complex
    error: float
    method: str
    converged: bool = True


@dataclass(frozen=True)
class KNormEstimate:
    """Grid estimate of sup |F(z)| |Im z|^l; a lower bound on the true supremum"""
    value: float
    argmax: complex
    ell: float
    unbounded: bool

    def __float__(self) -> float:
        return self.value


def _fourier_nodes(f: TestFunction, panels: int = 256, order: int = 16) -> Tuple[np.ndarray, np.ndarray, float]:
    lo, hi = f.support
    nodes, weights = composite_nodes(np.linspace(lo, hi, panels + 1), order)
    # frequencies resolved by the node set
    p_limit = 0.8 * np.pi * nodes.size / (hi - lo)
    return nodes, weights, p_limit


def _spectral_pairing(kernel: Kernel, f: TestFunction) -> BoundaryValue:
    measure = kernel.spectral
    if measure.is_zero:
        return BoundaryValue(0.0, 0.0, 'spectral')
    nodes, weights, p_limit = _fourier_nodes(f)
    values = f(nodes)
    reach = max(abs(nodes[0]), abs(nodes[-1]), 1e-3)

    def transform_at_minus_p(p):
        return nonuniform_transform(values, nodes, weights, p, sign=-1.0)

    def floor(p):
        return transform_noise_floor(values, nodes, weights, p)

    result = measure.integrate(transform_at_minus_p, panel_width=np.pi / reach, p_limit=p_limit, noise_floor=floor)
    return BoundaryValue(complex(result.values[0]) / (2 * np.pi), float(result.error[0]) / (2 * np.pi), 'spectral')


def _direct_pairing(kernel: Kernel, f: TestFunction) -> BoundaryValue:
    lo, hi = f.support
    out = integrate_with_error(lambda x: complex(f(np.array([x]))[0] * kernel.evaluate(np.array([x]))[0]),
                               (lo, hi), strict=False)
    return BoundaryValue(out.value, out.error, 'direct')


def regularized_pairing(kernel: Kernel, f: TestFunction, y: float) -> Tuple[complex, float]:
    """int f(x) F(x - iy) dx by adaptive quadrature, breakpoints at the kernel's singular points"""
    lo, hi = f.support

    def integrand(x):
        return complex(f(np.array([x]))[0] * kernel.evaluate(np.array([x - 1j * y]))[0])

    out = integrate_with_error(integrand, (lo, hi), points=kernel.singular_points, strict=False, limit=1000)
    return out.value, out.error


def _epsilon_pairing(kernel: Kernel, f: TestFunction, order: Optional[int] = None,
                     k_range: Optional[Tuple[int, int]] = None) -> BoundaryValue:
    settings = get_settings().numerics.boundary
    k_min, k_max = (settings.eps_k_min, settings.eps_k_max) if k_range is None else k_range
    ks = range(k_min, k_max + 1)
    pairs = []
    quad_error = 0.0
    for k in ks:
        y = 2.0 ** (-k)
        value, err = regularized_pairing(kernel, f, y)
        pairs.append((y, value))
        quad_error = max(quad_error, err)
    result = extrapolate_to_zero(pairs, order=order)
    if not result.converged:
        raise ExtrapolationError(
            f"boundary value of '{kernel.label}' did not converge as y -> 0 "
            f"(last regularized value {result.limit:.6g})",
            best_estimate=result.limit, error_estimate=result.error_estimate,
        )
    return BoundaryValue(result.limit, result.error_estimate + quad_error, 'epsilon', True)


def eval_boundary(kernel: Kernel, f: TestFunction, method: str = 'auto',
                  order: Optional[int] = None, k_range: Optional[Tuple[int, int]] = None) -> BoundaryValue:
    """
    Pairing int K(x - i0) f(x) dx

    Args:
        kernel: any kernel variant
        f: compactly supported test function
        method: 'auto', 'spectral', 'epsilon' or 'direct'
        order: extrapolation order for the epsilon path
        k_range: (k_min, k_max) of the regularization heights y = 2^-k

    Returns:
        BoundaryValue with the value, an error estimate and the path taken

    Raises:
        ExtrapolationError: the regularized values do not settle as y -> 0
    """
    if method not in _METHODS:
        raise PreconditionError(f"unknown method '{method}', expected one of {_METHODS}")
    if not f.compact:
        raise PreconditionError("eval_boundary needs a compactly supported test function")
    if kernel.is_zero:
        return BoundaryValue(0.0, 0.0, 'trivial')

    if method == 'auto':
        if isinstance(kernel, SmoothKernel):
            method = 'direct'
        elif kernel.has_spectral_form:
            method = 'spectral'
        else:
            method = 'epsilon'

    logger.debug(f"Pairing {kernel.label} with {f.family} via {method}")
    if method == 'spectral':
        return _spectral_pairing(kernel, f)
    if method == 'direct':
        if not isinstance(kernel, SmoothKernel):
            raise PreconditionError("direct pairing is only defined for smooth kernels")
        return _direct_pairing(kernel, f)
    return _epsilon_pairing(kernel, f, order=order, k_range=k_range)


def knorm_estimate(kernel: Kernel, ell: float, re_range: Optional[Tuple[float, float]] = None,
                   im_points: Optional[int] = None, re_points: Optional[int] = None) -> KNormEstimate:
    """
    sup over -1 <= Im z < 0 of |F(z)| |Im z|^ell on a log-spaced grid in Im z

    Raises:
        KernelEvaluationError: F overflows or is not finite at a grid point
    """
    if not ell > 0:
        raise PreconditionError(f"ell must be positive, got {ell}")
    settings = get_settings().numerics.boundary
    re_range = tuple(settings.knorm_re_range) if re_range is None else re_range
    im_points = settings.knorm_im_points if im_points is None else im_points
    re_points = settings.knorm_re_points if re_points is None else re_points
    if re_points % 2 == 0:
        re_points += 1

    y = np.logspace(-8, 0, im_points)
    x = np.linspace(re_range[0], re_range[1], re_points)
    X, Y = np.meshgrid(x, y, indexing='ij')
    Z = X - 1j * Y
    values = np.abs(kernel.evaluate(Z))
    bad = ~np.isfinite(values)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        point = complex(Z[i, j])
        raise KernelEvaluationError(f"kernel '{kernel.label}' is not finite at z = {point}", point)

    weighted = values * Y ** ell
    per_y = weighted.max(axis=0)
    i, j = np.unravel_index(np.argmax(weighted), weighted.shape)
    unbounded = bool(j == 0 and per_y[0] > per_y[1] * (1 + 1e-9))
    if unbounded:
        logger.warning(f"|F(z)| |Im z|^{ell} grows towards the real axis; '{kernel.label}' is not in this class")
    return KNormEstimate(float(weighted[i, j]), complex(Z[i, j]), float(ell), unbounded)


def knorm_product_check(first: Kernel, second: Kernel, ell: float, m: float) -> Tuple[float, float]:
    """(||FG||_{l+m}, ||F||_l ||G||_m) on the same grid; callers assert lhs <= rhs"""

    class _Product(Kernel):
        variant = 'analytic'
        label = f'({first.label})({second.label})'

        def evaluate(self, z):
            return first.evaluate(z) * second.evaluate(z)

    lhs = knorm_estimate(_Product(), ell + m).value
    rhs = knorm_estimate(first, ell).value * knorm_estimate(second, m).value
    return lhs, rhs


def boundary_bound(ell: int, d: float, knorm: float, sob: float) -> float:
    """4^{l+2} (l+3) (1 + d^{-l-2}) knorm sob"""
    if ell < 0 or knorm < 0 or sob < 0:
        raise PreconditionError("ell, knorm and sob must be nonnegative")
    if not d > 0:
        raise PreconditionError(f"d must be positive, got {d}")
    return float(4 ** (ell + 2) * (ell + 3) * (1 + d ** (-ell - 2)) * knorm * sob)
