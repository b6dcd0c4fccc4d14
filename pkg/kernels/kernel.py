"""
Kernels - Boundary Values of Analytic Functions
===============================================

A kernel K(s' - i0) is stored through the analytic function F(z) on the
lower half-plane whose boundary value it is. Four variants exist:

    HomogeneousKernel      amplitude * (i(s' - i0))^beta
    AnalyticClosureKernel  an arbitrary callable F(z)
    SpectralKernel         (1/2 pi) int dK~(p) e^{-ipz} for a SpectralMeasure
    SmoothKernel           a smooth function of the real variable

Kernels are immutable; every evaluation is a pure function of its inputs.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, Optional, Tuple, Union

import numpy as np
import sympy as sp

from kernels.measures import (
    SpectralMeasure, convolve_measures, free_field_spectral_density, homogeneous_measure, with_scale,
)
from utils.errors import PreconditionError, SpectralFormUnavailable
from utils.logger import setup_logger

logger = setup_logger('kernels')


class PositivityStatus(str, Enum):
    CERTIFIED_POSITIVE = 'certified_positive'
    CERTIFIED_NOT = 'certified_not'
    UNKNOWN = 'unknown'


@dataclass(frozen=True)
class PositiveTypeCertificate:
    status: PositivityStatus
    method: str
    detail: str = ''
    witness_value: Optional[complex] = None

    @property
    def is_positive(self) -> bool:
        return self.status is PositivityStatus.CERTIFIED_POSITIVE


class Kernel(ABC):
    """Distribution K(s' - i0) on the real line"""

    variant: str = 'abstract'
    singular_points: Tuple[float, ...] = ()
    label: str = ''

    @abstractmethod
    def evaluate(self, z) -> np.ndarray:
        """F(z), for Im z < 0 (real z allowed for smooth kernels)"""

    @property
    def spectral(self) -> SpectralMeasure:
        raise SpectralFormUnavailable(f"{self.variant} kernel '{self.label}' has no spectral form")

    @property
    def has_spectral_form(self) -> bool:
        try:
            self.spectral
        except SpectralFormUnavailable:
            return False
        return True

    @property
    def positive_type(self) -> Optional[PositiveTypeCertificate]:
        """Certificate that follows from the representation alone, if any"""
        return None

    @property
    def is_zero(self) -> bool:
        return False

    def describe(self) -> Dict[str, Any]:
        return {'type': self.variant, 'label': self.label}


def _spectral_certificate(measure: SpectralMeasure) -> Optional[PositiveTypeCertificate]:
    if measure.is_zero:
        return PositiveTypeCertificate(PositivityStatus.CERTIFIED_POSITIVE, 'zero measure')
    scale = complex(measure.scale)
    if scale.imag == 0 and scale.real > 0:
        return PositiveTypeCertificate(PositivityStatus.CERTIFIED_POSITIVE, 'nonnegative spectral measure')
    if scale.imag == 0 and scale.real < 0:
        return PositiveTypeCertificate(PositivityStatus.CERTIFIED_NOT, 'negative multiple of a nonzero measure')
    return None


class HomogeneousKernel(Kernel):
    """amplitude * (i(s' - i0))^beta; spectral for beta < 0"""

    variant = 'homogeneous'
    singular_points = (0.0,)

    def __init__(self, beta: float, amplitude: complex = 1.0):
        if not np.isfinite(beta):
            raise PreconditionError(f"beta must be a finite real number, got {beta}")
        self.beta = float(beta)
        self.amplitude = complex(amplitude) if np.iscomplexobj(amplitude) else float(amplitude)
        self.label = f'(i(s-i0))^{self.beta:g}'

    def evaluate(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            return self.amplitude * np.power(1j * z, self.beta)

    @property
    def spectral(self) -> SpectralMeasure:
        if self.beta >= 0:
            raise SpectralFormUnavailable(
                f"(i(s-i0))^{self.beta:g} with beta >= 0 is a polynomially growing distribution without spectral density")
        if self.amplitude == 0:
            return SpectralMeasure.zero()
        return homogeneous_measure(self.beta, self.amplitude)

    @property
    def is_zero(self) -> bool:
        return self.amplitude == 0

    @property
    def positive_type(self) -> Optional[PositiveTypeCertificate]:
        if self.amplitude == 0:
            return PositiveTypeCertificate(PositivityStatus.CERTIFIED_POSITIVE, 'zero kernel')
        if self.beta >= 0:
            return None
        return _spectral_certificate(self.spectral)

    def describe(self) -> Dict[str, Any]:
        amp = complex(self.amplitude)
        return {'type': self.variant, 'beta': self.beta, 'amplitude': [amp.real, amp.imag]}


class AnalyticClosureKernel(Kernel):
    """Boundary value of an arbitrary analytic F on the lower half-plane"""

    variant = 'analytic'

    def __init__(self, func: Callable[[np.ndarray], np.ndarray], singular_points: Tuple[float, ...] = (0.0,),
                 label: str = 'F'):
        self.func = func
        self.singular_points = tuple(float(x) for x in singular_points)
        self.label = label

    def evaluate(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            return np.asarray(self.func(z), dtype=complex) * np.ones_like(z)


class SpectralKernel(Kernel):
    """(1/2 pi) int dK~(p) e^{-ipz} with a measure on [0, inf)"""

    variant = 'spectral'
    singular_points = (0.0,)

    def __init__(self, measure: SpectralMeasure, label: str = ''):
        self.measure = measure
        self.label = label or measure.label

    @property
    def spectral(self) -> SpectralMeasure:
        return self.measure

    @property
    def is_zero(self) -> bool:
        return self.measure.is_zero

    @property
    def positive_type(self) -> Optional[PositiveTypeCertificate]:
        return _spectral_certificate(self.measure)

    def evaluate(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        if self.measure.is_zero:
            return np.zeros(z.shape, dtype=complex)
        if self.measure.density is not None and np.any(flat.imag >= 0):
            raise PreconditionError("spectral kernels are evaluated at Im z < 0 only")
        y_min = np.min(-flat.imag) if self.measure.density is not None else 1.0
        x_max = max(np.max(np.abs(flat.real)), 1e-6)
        width = min(np.pi / x_max, 1.0 / y_min)

        def integrand(p):
            return np.exp(-1j * np.outer(flat, p))

        result = self.measure.integrate(integrand, panel_width=width)
        return (result.values / (2 * np.pi)).reshape(z.shape)


class SmoothKernel(Kernel):
    """C(s') smooth on the real line, optionally carrying its sympy expression"""

    variant = 'smooth'

    def __init__(self, func: Callable[[np.ndarray], np.ndarray], expr: Optional[sp.Expr] = None,
                 label: str = ''):
        self.func = func
        self.expr = expr
        self.label = label or (str(expr) if expr is not None else 'C')

    @property
    def constant(self) -> Optional[complex]:
        if self.expr is not None and not self.expr.free_symbols:
            value = complex(self.expr)
            return value.real if value.imag == 0 else value
        return None

    def evaluate(self, z) -> np.ndarray:
        z = np.asarray(z)
        values = np.asarray(self.func(z))
        return np.broadcast_to(values, z.shape).copy() if values.shape != z.shape else values

    @property
    def spectral(self) -> SpectralMeasure:
        c = self.constant
        if c is None:
            raise SpectralFormUnavailable(f"smooth kernel '{self.label}' has no spectral form")
        if c == 0:
            return SpectralMeasure.zero()
        return SpectralMeasure(atoms=((0.0, 2 * np.pi),), growth_bound=(2 * np.pi, 0.0), scale=c,
                               label=f'constant({c})')

    @property
    def is_zero(self) -> bool:
        return self.constant == 0

    @property
    def positive_type(self) -> Optional[PositiveTypeCertificate]:
        if self.constant is None:
            return None
        return _spectral_certificate(self.spectral)

    def describe(self) -> Dict[str, Any]:
        return {'type': self.variant, 'expr': self.label}


def homogeneous_kernel(beta: float, amplitude: complex = 1.0) -> HomogeneousKernel:
    return HomogeneousKernel(beta, amplitude)


def free_field_kernel(mass: float) -> SpectralKernel:
    """Vacuum two-point function Delta_+(s') of the free scalar field on the time axis"""
    measure = with_scale(free_field_spectral_density(mass), 2 * np.pi)
    return SpectralKernel(measure, label=f'Delta_+(m={mass:g})')


def smooth_kernel(expr: Union[str, sp.Expr, Callable]) -> SmoothKernel:
    """
    Smooth kernel from a sympy expression in the variable s, or a callable

    Examples:
        smooth_kernel('exp(-s**2)'), smooth_kernel('s'), smooth_kernel('1')
    """
    if callable(expr) and not isinstance(expr, (sp.Expr, str)):
        return SmoothKernel(expr)
    s = sp.Symbol('s', real=True)
    try:
        parsed = sp.sympify(expr, locals={'s': s}) if isinstance(expr, str) else expr
    except (sp.SympifyError, SyntaxError, TypeError) as exc:
        raise PreconditionError(f"cannot parse smooth kernel expression {expr!r}: {exc}") from exc
    extra = parsed.free_symbols - {s}
    if extra:
        raise PreconditionError(f"smooth kernel may only depend on s, found {sorted(map(str, extra))}")
    func = sp.lambdify(s, parsed, modules='numpy')
    return SmoothKernel(func, expr=parsed)


def analytic_kernel(expr: Union[str, sp.Expr], singular_points: Tuple[float, ...] = (0.0,)) -> AnalyticClosureKernel:
    """
    Boundary-value kernel from a sympy expression in the complex variable z

    Examples:
        analytic_kernel('1/z'), analytic_kernel('1/(z**2 + 1)', singular_points=())
    """
    z = sp.Symbol('z')
    try:
        parsed = sp.sympify(expr, locals={'z': z}) if isinstance(expr, str) else expr
    except (sp.SympifyError, SyntaxError, TypeError) as exc:
        raise PreconditionError(f"cannot parse analytic kernel expression {expr!r}: {exc}") from exc
    extra = parsed.free_symbols - {z}
    if extra:
        raise PreconditionError(f"analytic kernel may only depend on z, found {sorted(map(str, extra))}")
    func = sp.lambdify(z, parsed, modules='numpy')
    return AnalyticClosureKernel(func, singular_points, label=str(parsed))


def kernel_product_spectrum(k1: Kernel, k2: Kernel) -> SpectralMeasure:
    """
    Spectral measure of the pointwise product K1 K2, i.e. (1/2 pi)(K~1 * K~2)

    Raises:
        SpectralFormUnavailable: one of the kernels has no spectral form
        SpectralTruncationError: growth orders beyond the supported range
    """
    return convolve_measures(k1.spectral, k2.spectral)
