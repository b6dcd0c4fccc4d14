"""
Positivity of formal power series in a coupling constant
"""

from .series import FormalPowerSeries, PositivityWitness, fps_is_positive, fps_sqrt, fps_mul, fps_conj

__all__ = ['FormalPowerSeries', 'PositivityWitness', 'fps_is_positive', 'fps_sqrt', 'fps_mul', 'fps_conj']
