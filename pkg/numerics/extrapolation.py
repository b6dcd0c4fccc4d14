from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from utils.config import get_settings
from utils.errors import PreconditionError
from utils.logger import setup_logger

logger = setup_logger('extrapolation')


@dataclass(frozen=True)
class ExtrapolationResult:
    limit: complex
    error_estimate: float
    converged: bool
    order: int


def _neville_at_zero(h: np.ndarray, v: np.ndarray) -> Tuple[complex, complex]:
    """Value of the interpolating polynomial at h=0 and the one of degree one less"""
    table = v.astype(complex).copy()
    previous = table[-1]
    n = h.size
    for level in range(1, n):
        previous = table[n - level]
        for i in range(n - level):
            j = i + level
            table[i] = (h[i] * table[i + 1] - h[j] * table[i]) / (h[i] - h[j])
    # table[0] is P_{0..n-1}(0); the last-stage partner is P_{1..n-1}(0)
    return table[0], previous


def extrapolate_to_zero(pairs: Sequence[Tuple[float, complex]], order: Optional[int] = None) -> ExtrapolationResult:
    """
    Polynomial (Richardson-Neville) extrapolation of v(h) to h -> 0

    Args:
        pairs: (h, value) with h > 0 strictly decreasing, at least 3 pairs
        order: polynomial degree; the order+1 smallest h are used

    Returns:
        ExtrapolationResult. When the differences between successive values
        do not shrink, the smallest-h value is returned with converged=False.
    """
    settings = get_settings().numerics.extrapolation
    order = settings.order if order is None else order
    if len(pairs) < 3:
        raise PreconditionError(f"extrapolation needs at least 3 pairs, got {len(pairs)}")

    h = np.array([float(p[0]) for p in pairs])
    v = np.array([complex(p[1]) for p in pairs])
    if np.any(h <= 0):
        raise PreconditionError("step sizes must be positive")
    if np.any(np.diff(h) >= 0):
        raise PreconditionError("step sizes must be strictly decreasing")

    scale = max(np.max(np.abs(v)), 1e-300)
    residuals = np.abs(np.diff(v))
    floor = settings.residual_floor * scale
    significant = residuals > floor
    # residuals must shrink once they are above the noise floor
    monotone = all(b <= a * (1 + 1e-9) for a, b in zip(residuals[significant], residuals[significant][1:]))
    if not monotone:
        logger.warning("Non-monotone residuals in extrapolation; returning smallest-h value")
        tail = residuals[-1] if residuals.size else np.inf
        return ExtrapolationResult(v[-1], float(tail), False, 0)

    m = min(order + 1, h.size)
    limit, partner = _neville_at_zero(h[-m:], v[-m:])
    error = float(abs(limit - partner))
    return ExtrapolationResult(limit, error, True, m - 1)
