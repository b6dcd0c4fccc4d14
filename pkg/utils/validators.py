import json
from typing import Any, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from utils.errors import PreconditionError, SpecFormatError


def validate_range(name: str, value: float, bounds: Tuple[float, float]) -> float:
    """Check a numeric override against its admissible range"""
    low, high = bounds
    if not np.isfinite(value) or value < low or value > high:
        raise PreconditionError(f"{name}={value} outside admissible range [{low}, {high}]")
    return value


def validate_lambda_grid(lambdas: Iterable[float], minimum_length: int = 1) -> List[float]:
    """Lambda grids must be strictly decreasing and positive"""
    grid = [float(x) for x in lambdas]
    if len(grid) < minimum_length:
        raise PreconditionError(f"lambda grid needs at least {minimum_length} entries, got {len(grid)}")
    if any(x <= 0 for x in grid):
        raise PreconditionError("lambda grid entries must be positive")
    validate_decreasing(grid, 'lambda grid')
    return grid


def validate_decreasing(values: Sequence[float], name: str = 'h') -> None:
    if any(b >= a for a, b in zip(values, values[1:])):
        raise PreconditionError(f"{name} must be strictly decreasing")


def parse_number_list(text: Any, name: str) -> Optional[List[float]]:
    """'[1, 0.5]', '1,0.5' or an already parsed list"""
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    stripped = str(text).strip().lstrip('[').rstrip(']')
    try:
        return [float(part) for part in stripped.split(',') if part.strip()]
    except ValueError as exc:
        raise SpecFormatError(f"expected a list of numbers, got {text!r}", field=name) from exc


def parse_coefficients(text: Any) -> Optional[List[Any]]:
    """JSON array of series coefficients; numbers and strings such as '1/24' are kept as given"""
    if text is None or isinstance(text, list):
        return text
    try:
        values = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"malformed JSON at column {exc.colno}: {exc.msg}", field='coeffs') from exc
    if not isinstance(values, list) or not values:
        raise SpecFormatError("expected a nonempty JSON array", field='coeffs')
    return values
