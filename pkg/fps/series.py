"""
Formal Power Series - Positivity and Square Roots
=================================================

A truncated series P[g] = sum_{k<=N} c_k g^k with real coefficients is positive
(P = Q* Q for some real Q) exactly when its lowest nonzero coefficient sits
at an even index 2n and is positive. The witness root is

    Q = sqrt(d0) g^n sqrt(1 + x),   x = P / (d0 g^{2n}) - 1,

expanded with the binomial series. Exact mode keeps sympy rationals; float
mode decides zeros with an absolute threshold.
"""

from dataclasses import dataclass
from numbers import Number
from typing import List, Sequence, Tuple, Union

import sympy as sp

from utils.errors import PreconditionError
from utils.logger import setup_logger

logger = setup_logger('fps')

FLOAT_ZERO = 1e-12

Coefficient = Union[int, float, str, sp.Expr]


def _to_exact(value: Coefficient) -> sp.Expr:
    if isinstance(value, sp.Expr):
        return value
    if isinstance(value, float):
        # str() keeps the decimal the user typed, not the binary expansion
        return sp.Rational(str(value))
    if isinstance(value, int):
        return sp.Integer(value)
    if isinstance(value, str):
        try:
            return sp.Rational(value)
        except (TypeError, ValueError):
            return sp.sympify(value)
    if isinstance(value, Number):
        return sp.Rational(str(float(value)))
    raise PreconditionError(f"cannot interpret coefficient {value!r}")


@dataclass(frozen=True)
class FormalPowerSeries:
    coefficients: Tuple
    truncation_order: int
    exact: bool = True

    def __post_init__(self):
        if self.truncation_order < 0:
            raise PreconditionError("truncation order must be >= 0")
        coeffs = list(self.coefficients)[:self.truncation_order + 1]
        coeffs += [0] * (self.truncation_order + 1 - len(coeffs))
        if self.exact:
            coeffs = [_to_exact(c) for c in coeffs]
        else:
            coeffs = [float(c) for c in coeffs]
        object.__setattr__(self, 'coefficients', tuple(coeffs))

    @classmethod
    def from_coefficients(cls, coefficients: Sequence[Coefficient], order: int = None,
                          exact: bool = True) -> 'FormalPowerSeries':
        if not coefficients:
            raise PreconditionError("a series needs at least one coefficient")
        order = len(coefficients) - 1 if order is None else order
        return cls(tuple(coefficients), order, exact)

    def __getitem__(self, k: int):
        return self.coefficients[k]

    def __len__(self) -> int:
        return len(self.coefficients)

    def is_zero_coefficient(self, k: int) -> bool:
        c = self.coefficients[k]
        if self.exact:
            return sp.simplify(c) == 0
        return abs(c) <= FLOAT_ZERO

    def lowest_nonzero(self) -> int:
        """Index of the lowest nonzero coefficient, -1 for the zero series"""
        for k in range(len(self)):
            if not self.is_zero_coefficient(k):
                return k
        return -1

    def __mul__(self, other: 'FormalPowerSeries') -> 'FormalPowerSeries':
        return fps_mul(self, other)

    def equals(self, other: 'FormalPowerSeries') -> bool:
        """Coefficientwise equality through the common truncation order"""
        n = min(self.truncation_order, other.truncation_order)
        for a, b in zip(self.coefficients[:n + 1], other.coefficients[:n + 1]):
            if self.exact and other.exact:
                if sp.simplify(sp.expand(a - b)) != 0:
                    return False
            elif abs(complex(a) - complex(b)) > FLOAT_ZERO * max(1.0, abs(complex(a))):
                return False
        return True

    def as_floats(self) -> List[float]:
        return [float(c) for c in self.coefficients]

    def __str__(self) -> str:
        terms = [f"{c}*g^{k}" for k, c in enumerate(self.coefficients) if c != 0]
        return ' + '.join(terms) if terms else '0'


@dataclass(frozen=True)
class PositivityWitness:
    positive: bool
    n: int
    d0: object
    failing_index: int = -1


def fps_is_positive(series: FormalPowerSeries) -> PositivityWitness:
    """Lowest nonzero coefficient at an even index 2n and positive; the zero series is positive"""
    k = series.lowest_nonzero()
    if k < 0:
        return PositivityWitness(True, 0, series.coefficients[0])
    d0 = series.coefficients[k]
    positive = k % 2 == 0 and (bool(d0 > 0) if series.exact else d0 > FLOAT_ZERO)
    return PositivityWitness(positive, k // 2, d0, -1 if positive else k)


def _truncated_product(a: Sequence, b: Sequence, order: int, zero) -> List:
    out = [zero] * (order + 1)
    for i, x in enumerate(a[:order + 1]):
        if x == 0:
            continue
        for j in range(min(len(b), order + 1 - i)):
            out[i + j] = out[i + j] + x * b[j]
    return out


def fps_mul(first: FormalPowerSeries, second: FormalPowerSeries) -> FormalPowerSeries:
    """Cauchy product truncated at the smaller order"""
    order = min(first.truncation_order, second.truncation_order)
    exact = first.exact and second.exact
    zero = sp.Integer(0) if exact else 0.0
    a, b = first.coefficients, second.coefficients
    if not exact:
        a = [float(c) for c in a]
        b = [float(c) for c in b]
    product = _truncated_product(a, b, order, zero)
    if exact:
        product = [sp.expand(c) for c in product]
    return FormalPowerSeries(tuple(product), order, exact)


def fps_conj(series: FormalPowerSeries) -> FormalPowerSeries:
    if series.exact:
        return FormalPowerSeries(tuple(sp.conjugate(c) for c in series.coefficients), series.truncation_order, True)
    return series


def fps_sqrt(series: FormalPowerSeries) -> FormalPowerSeries:
    """
    Real Q with Q Q = P through the truncation order and positive leading coefficient

    Raises:
        PreconditionError: P is not positive; the message names the failing coefficient
    """
    witness = fps_is_positive(series)
    if not witness.positive:
        k = witness.failing_index
        reason = 'odd index' if k % 2 else 'negative value'
        raise PreconditionError(
            f"series is not positive: lowest nonzero coefficient c_{k} = {series.coefficients[k]} ({reason})")

    order = series.truncation_order
    exact = series.exact
    zero = sp.Integer(0) if exact else 0.0
    if series.lowest_nonzero() < 0:
        return FormalPowerSeries(tuple([zero] * (order + 1)), order, exact)

    n, d0 = witness.n, witness.d0
    rest = order - 2 * n
    x = [zero] + [c / d0 for c in series.coefficients[2 * n + 1:]]
    x = x[:rest + 1]

    root = [zero] * (rest + 1)
    root[0] = root[0] + 1
    power = [zero] * (rest + 1)
    power[0] = power[0] + 1
    for j in range(1, rest + 1):
        power = _truncated_product(power, x, rest, zero)
        coeff = sp.binomial(sp.Rational(1, 2), j) if exact else float(sp.binomial(sp.Rational(1, 2), j))
        root = [r + coeff * p for r, p in zip(root, power)]

    lead = sp.sqrt(d0) if exact else float(d0) ** 0.5
    coefficients = [zero] * (order + 1)
    for k, s in enumerate(root):
        if k + n <= order:
            coefficients[k + n] = sp.expand(lead * s) if exact else lead * s
    logger.debug(f"Square root built with n={n}, d0={d0}, order {order}")
    return FormalPowerSeries(tuple(coefficients), order, exact)
