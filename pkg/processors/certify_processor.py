"""
Certify Processor - Positivity Certificates and Series Positivity
=================================================================

Certificates for the sampling functions of homogeneous kernels, and the
positivity decision with square-root witness for formal power series.
"""

from typing import Any, Dict, List, Sequence

from fps.series import FormalPowerSeries, fps_is_positive, fps_mul, fps_sqrt
from positivity.certificates import Certificate, certify
from testfn.functions import TestFunction
from utils.logger import setup_logger


class CertifyProcessor:
    """
    Processor for the 'certify' and 'fps' commands
    """

    def __init__(self):
        """Initialize the certify processor"""
        self.logger = setup_logger('certify_processor')

    def process_certificate(self, beta: float, g: TestFunction) -> Certificate:
        """
        Positivity certificate for (i(s' - i0))^beta against conj(g) <> g

        Raises:
            CertificationError: a certified sampling function fails its grid check
        """
        certificate = certify(beta, g)
        self.logger.info(f"beta={beta:g}: {certificate.status.value}")
        return certificate

    def process_series(self, coefficients: Sequence[Any]) -> Dict[str, Any]:
        """
        Positivity of a truncated series and its square-root witness

        Args:
            coefficients (list): c_0, c_1, ... in ascending order; decimals are read exactly

        Returns:
            dict: positive, n, d0, and for positive series the root Q with a Q Q = P check
        """
        series = FormalPowerSeries.from_coefficients(list(coefficients))
        witness = fps_is_positive(series)
        result: Dict[str, Any] = {
            'series': _coefficient_strings(series),
            'positive': witness.positive,
            'n': witness.n,
            'd0': float(witness.d0),
            'd0_exact': str(witness.d0),
        }
        if witness.positive:
            root = fps_sqrt(series)
            result['root'] = _coefficient_strings(root)
            result['root_float'] = root.as_floats()
            result['square_matches'] = fps_mul(root, root).equals(series)
        else:
            result['failing_index'] = witness.failing_index
        self.logger.info(f"Series positivity: {witness.positive} (n={witness.n}, d0={witness.d0})")
        return result


def _coefficient_strings(series: FormalPowerSeries) -> List[str]:
    return [str(c) for c in series.coefficients]
