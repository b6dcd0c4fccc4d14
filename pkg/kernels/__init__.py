"""
Distributional kernels, spectral measures and boundary-value pairings
"""

from .measures import (
    SpectralMeasure, MeasureIntegral, free_field_spectral_density, homogeneous_measure, convolve_measures,
)
from .kernel import (
    Kernel, HomogeneousKernel, AnalyticClosureKernel, SpectralKernel, SmoothKernel,
    PositivityStatus, PositiveTypeCertificate,
    homogeneous_kernel, free_field_kernel, smooth_kernel, analytic_kernel, kernel_product_spectrum,
)
from .boundary import (
    BoundaryValue, KNormEstimate, eval_boundary, regularized_pairing, knorm_estimate,
    knorm_product_check, boundary_bound,
)
from .positive_type import is_positive_type

__all__ = [
    'SpectralMeasure', 'MeasureIntegral', 'free_field_spectral_density', 'homogeneous_measure',
    'convolve_measures',
    'Kernel', 'HomogeneousKernel', 'AnalyticClosureKernel', 'SpectralKernel', 'SmoothKernel',
    'PositivityStatus', 'PositiveTypeCertificate',
    'homogeneous_kernel', 'free_field_kernel', 'smooth_kernel', 'analytic_kernel', 'kernel_product_spectrum',
    'BoundaryValue', 'KNormEstimate', 'eval_boundary', 'regularized_pairing', 'knorm_estimate',
    'knorm_product_check', 'boundary_bound',
    'is_positive_type',
]
