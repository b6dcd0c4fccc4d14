"""
Sampling functions, Wigner functions and kernel quadratic forms
"""

from .wigner import DiamondRows, WignerFunction, diamond_rows, wigner
from .construct import (
    SamplingFunction, sampling_spectral, sampling_homogeneous, sampling_general, sample_kernel,
)
from .quadratic import FourierSpline, TwoPointData, VacuumTwoPoint, quadratic_form

__all__ = [
    'DiamondRows', 'WignerFunction', 'diamond_rows', 'wigner',
    'SamplingFunction', 'sampling_spectral', 'sampling_homogeneous', 'sampling_general', 'sample_kernel',
    'FourierSpline', 'TwoPointData', 'VacuumTwoPoint', 'quadratic_form',
]
