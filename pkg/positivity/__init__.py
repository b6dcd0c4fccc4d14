"""
Positivity certificates for sampling functions of homogeneous kernels
"""

from .certificates import (
    CertificateStatus, CertificateRule, Certificate, HudsonResult,
    is_log_concave, certify_pointwise, certify, average_positivity, spectral_average,
    garding_scan, hudson_negativity, certificate_table,
)

__all__ = [
    'CertificateStatus', 'CertificateRule', 'Certificate', 'HudsonResult',
    'is_log_concave', 'certify_pointwise', 'certify', 'average_positivity', 'spectral_average',
    'garding_scan', 'hudson_negativity', 'certificate_table',
]
