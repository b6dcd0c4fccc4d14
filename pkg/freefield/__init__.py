"""
Free scalar field: QEI and Wick-square bounds, Fock states, state scans
"""

from .bounds import (
    qei_bound, multi_species_bound, wick_square_bound, wick_square_bound_oracle,
    autocorrelation_profile, scaled_wick_bounds,
)
from .fock import (
    ModeFunction, FockStateTwo, TimeProfile, MixingResult, FockBasis, FockTwoPoint,
    mode_transform, matrix_elements, wick_square_expectation, minimize_mixing, optimal_mixing,
    fock_oracle_expectation, normal_ordered_two_point, remainder_term, time_grid,
)
from .verification import QIEntry, QIReport, qei_scan

__all__ = [
    'qei_bound', 'multi_species_bound', 'wick_square_bound', 'wick_square_bound_oracle',
    'autocorrelation_profile', 'scaled_wick_bounds',
    'ModeFunction', 'FockStateTwo', 'TimeProfile', 'MixingResult', 'FockBasis', 'FockTwoPoint',
    'mode_transform', 'matrix_elements', 'wick_square_expectation', 'minimize_mixing', 'optimal_mixing',
    'fock_oracle_expectation', 'normal_ordered_two_point', 'remainder_term', 'time_grid',
    'QIEntry', 'QIReport', 'qei_scan',
]
