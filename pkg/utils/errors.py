"""
Error Types - Exception Hierarchy
=================================

Every failure raised by the library derives from QiopeError so that the
command-line layer can map it onto an exit status. Numerical failures keep
the best available estimate so callers can still report it.
"""

from typing import Any, Dict, Optional


class QiopeError(Exception):
    """Base class for all library errors"""


class PreconditionError(QiopeError, ValueError):
    """An operation was called outside its documented domain"""


class IntegrationError(QiopeError):
    """Adaptive quadrature did not reach the requested tolerance"""

    def __init__(self, message: str, best_estimate: complex = 0.0, error_estimate: float = float('inf')):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class ExtrapolationError(QiopeError):
    """A limit could not be extrapolated from the supplied sequence"""

    def __init__(self, message: str, best_estimate: complex = 0.0, error_estimate: float = float('inf')):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class SpectralTruncationError(QiopeError):
    """A frequency integral was cut off while its integrand was still significant"""

    def __init__(self, message: str, report: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.report = report or {}


class KernelEvaluationError(QiopeError):
    """Evaluation of an analytic kernel overflowed or returned a non-finite value"""

    def __init__(self, message: str, point: complex):
        super().__init__(message)
        self.point = point


class SpectralFormUnavailable(QiopeError):
    """The kernel has no Fourier-side measure representation"""


class CertificationError(QiopeError):
    """A positivity certificate failed its independent grid check"""


class VerificationError(QiopeError):
    """A numerical self-check that must hold by construction failed"""


class SpecFormatError(QiopeError, ValueError):
    """A JSON/YAML input spec does not match its contract"""

    def __init__(self, message: str, field: str = ''):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field
