"""
Numerical foundation: quadrature, Fourier transforms, extrapolation
"""

from .quadrature import QuadratureResult, integrate, integrate_with_error, gauss_legendre_integrate
from .spectral import SampledFunction, Spectrum, spectral_transform, inverse_transform, nonuniform_transform
from .extrapolation import ExtrapolationResult, extrapolate_to_zero

__all__ = [
    'QuadratureResult', 'integrate', 'integrate_with_error', 'gauss_legendre_integrate',
    'SampledFunction', 'Spectrum', 'spectral_transform', 'inverse_transform', 'nonuniform_transform',
    'ExtrapolationResult', 'extrapolate_to_zero',
]
