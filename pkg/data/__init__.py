"""
Input specs: validation models and loading
"""

from .loader import SpecLoader, build_kernel, build_test_function
from .validator import RunConfig, SpecValidator

__all__ = ['SpecLoader', 'SpecValidator', 'RunConfig', 'build_kernel', 'build_test_function']
