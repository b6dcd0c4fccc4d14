"""
Test functions, scaled Sobolev norms and the diamond product
"""

from .functions import (
    TestFunction, StandardBump, MollifiedPolynomial, Sum, Product, Shift, Scale,
    Conjugate, Derivative, Gaussian, FunctionProfile,
    bump_derivatives, derivative, shift, scale, scaled_family,
)
from .norms import sobolev_norm, l1_norm, l2_norm_squared, l1_sum_bound_check
from .diamond import DiamondProduct, diamond, diamond_norm_estimate

__all__ = [
    'TestFunction', 'StandardBump', 'MollifiedPolynomial', 'Sum', 'Product', 'Shift', 'Scale',
    'Conjugate', 'Derivative', 'Gaussian', 'FunctionProfile',
    'bump_derivatives', 'derivative', 'shift', 'scale', 'scaled_family',
    'sobolev_norm', 'l1_norm', 'l2_norm_squared', 'l1_sum_bound_check',
    'DiamondProduct', 'diamond', 'diamond_norm_estimate',
]
