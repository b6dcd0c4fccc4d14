"""
Mesoscopic bounds: Riemann sums of short-distance sampling functions
"""

from .riemann import (
    MesoscopicConfig, ConvergenceResult, local_sampling, riemann_sampling, eta, eta_slope,
    germ_order_estimate, expected_exponent, hypothesis_holds, default_observables, pair_with_observable,
    convergence_check, riemann_weight_bound, normalized_bound_report,
)

__all__ = [
    'MesoscopicConfig', 'ConvergenceResult', 'local_sampling', 'riemann_sampling', 'eta', 'eta_slope',
    'germ_order_estimate', 'expected_exponent', 'hypothesis_holds', 'default_observables', 'pair_with_observable',
    'convergence_check', 'riemann_weight_bound', 'normalized_bound_report',
]
