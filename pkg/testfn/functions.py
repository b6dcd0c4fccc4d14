"""
Test Functions - Compactly Supported Smooth Functions
=====================================================

Every test function is an immutable node that evaluates its value and its
derivatives exactly (no finite differences). Leaves are the standard bump
exp(-1/(1-t^2)) and polynomials mollified by it; interior nodes build sums,
products, shifts, dilations, conjugates and derivatives.
"""

from abc import ABC, abstractmethod
from math import comb
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import hermite_e

from utils.config import get_settings
from utils.errors import PreconditionError

# exp(-1/u) is below 1e-217 here, and so is every derivative we evaluate
_EDGE_CUTOFF = 2e-3


def max_derivative() -> int:
    return get_settings().numerics.testfn.max_derivative


def _check_order(n: int) -> None:
    if n < 0 or n > max_derivative():
        raise PreconditionError(f"derivative order {n} outside 0..{max_derivative()}")


def bump_derivatives(x: np.ndarray, n_max: int) -> np.ndarray:
    """
    Rows 0..n_max of d^n/dx^n exp(-1/(1-x^2)), zero outside (-1, 1)

    With phi = -1/(1-x^2) = -(1/(1-x) + 1/(1+x))/2 the k-th derivative of phi is
    -(k!/2) (1/(1-x)^{k+1} + (-1)^k/(1+x)^{k+1}); the derivatives of exp(phi)
    follow from the complete Bell recursion B_{n+1} = sum_k C(n,k) phi^{(k+1)} B_{n-k}.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros((n_max + 1,) + x.shape)
    u = 1.0 - x * x
    inside = u > _EDGE_CUTOFF
    if not inside.any():
        return out
    xi = x[inside]
    a = 1.0 / (1.0 - xi)
    b = 1.0 / (1.0 + xi)

    phi = np.empty((n_max + 1, xi.size))
    fact = 1.0
    for k in range(1, n_max + 1):
        fact *= k
        phi[k] = -0.5 * fact * (a ** (k + 1) + (-1) ** k * b ** (k + 1))

    bell = np.empty((n_max + 1, xi.size))
    bell[0] = 1.0
    for n in range(n_max):
        acc = np.zeros(xi.size)
        for k in range(n + 1):
            acc += comb(n, k) * phi[k + 1] * bell[n - k]
        bell[n + 1] = acc

    base = np.exp(-1.0 / u[inside])
    out[:, inside] = bell * base[None, :]
    return out


class TestFunction(ABC):
    """Smooth function supported in (center - support_radius, center + support_radius)"""

    __test__ = False  # keep pytest from collecting this class

    family: str = 'abstract'
    center: float = 0.0
    support_radius: float = 1.0
    real_valued: bool = True
    compact: bool = True

    @abstractmethod
    def _derivative(self, t: np.ndarray, n: int) -> np.ndarray:
        ...

    def derivative(self, t, n: int = 0) -> np.ndarray:
        _check_order(n)
        t = np.asarray(t, dtype=float)
        return self._derivative(t, n)

    def __call__(self, t) -> np.ndarray:
        return self.derivative(t, 0)

    @property
    def support(self) -> Tuple[float, float]:
        return self.center - self.support_radius, self.center + self.support_radius

    def grid(self, n_points: int) -> np.ndarray:
        lo, hi = self.support
        return np.linspace(lo, hi, n_points)

    def conj(self) -> 'TestFunction':
        return self if self.real_valued else Conjugate(self)

    def __add__(self, other: 'TestFunction') -> 'TestFunction':
        return Sum((self, other))

    def __sub__(self, other: 'TestFunction') -> 'TestFunction':
        return Sum((self, other), (1.0, -1.0))

    def __neg__(self) -> 'TestFunction':
        return Sum((self,), (-1.0,))

    def __mul__(self, other):
        if isinstance(other, TestFunction):
            return Product((self, other))
        return Sum((self,), (complex(other) if np.iscomplexobj(other) else float(other),))

    __rmul__ = __mul__

    def describe(self) -> dict:
        return {'family': self.family, 'center': self.center, 'd': self.support_radius}


class StandardBump(TestFunction):
    """amplitude * exp(-1/(1-x^2)) with x = (t - center)/d"""

    family = 'standard_bump'

    def __init__(self, d: float = 1.0, center: float = 0.0, amplitude: float = 1.0):
        if d <= 0:
            raise PreconditionError(f"support radius must be positive, got {d}")
        self.support_radius = float(d)
        self.center = float(center)
        self.amplitude = amplitude
        self.real_valued = not np.iscomplexobj(amplitude)

    def _derivative(self, t, n):
        x = (t - self.center) / self.support_radius
        return self.amplitude * bump_derivatives(x, n)[n] / self.support_radius ** n


class MollifiedPolynomial(TestFunction):
    """q(x) * exp(-1/(1-x^2)) with x = (t - center)/d and q given by ascending coefficients"""

    family = 'mollified_polynomial'

    def __init__(self, coefficients: Sequence[float], d: float = 1.0, center: float = 0.0):
        if d <= 0:
            raise PreconditionError(f"support radius must be positive, got {d}")
        self.polynomial = Polynomial(np.asarray(coefficients))
        self.support_radius = float(d)
        self.center = float(center)
        self.real_valued = not np.iscomplexobj(self.polynomial.coef)

    def _derivative(self, t, n):
        x = (t - self.center) / self.support_radius
        bumps = bump_derivatives(x, n)
        total = np.zeros_like(x, dtype=self.polynomial.coef.dtype)
        q = self.polynomial
        for k in range(n + 1):
            total = total + comb(n, k) * q(x) * bumps[n - k]
            q = q.deriv()
        return total / self.support_radius ** n


class Sum(TestFunction):
    family = 'sum'

    def __init__(self, terms: Sequence[TestFunction], coefficients: Optional[Sequence[complex]] = None):
        self.terms = tuple(terms)
        if not self.terms:
            raise PreconditionError("a sum needs at least one term")
        self.coefficients = tuple(coefficients) if coefficients is not None else (1.0,) * len(self.terms)
        if len(self.coefficients) != len(self.terms):
            raise PreconditionError("one coefficient per term required")
        lo = min(g.support[0] for g in self.terms)
        hi = max(g.support[1] for g in self.terms)
        self.center = 0.5 * (lo + hi)
        self.support_radius = 0.5 * (hi - lo)
        self.real_valued = all(g.real_valued for g in self.terms) and not any(
            np.iscomplexobj(c) and np.imag(c) != 0 for c in self.coefficients)
        self.compact = all(g.compact for g in self.terms)

    def _derivative(self, t, n):
        total = 0
        for c, g in zip(self.coefficients, self.terms):
            total = total + c * g.derivative(t, n)
        if self.real_valued:
            total = np.real(total)
        return total


class Product(TestFunction):
    family = 'product'

    def __init__(self, factors: Sequence[TestFunction]):
        factors = tuple(factors)
        if len(factors) < 2:
            raise PreconditionError("a product needs at least two factors")
        if len(factors) > 2:
            factors = (Product(factors[:-1]), factors[-1])
        self.left, self.right = factors
        lo = max(self.left.support[0], self.right.support[0])
        hi = min(self.left.support[1], self.right.support[1])
        if hi <= lo:
            hi = lo = 0.5 * (hi + lo)
        self.center = 0.5 * (lo + hi)
        self.support_radius = 0.5 * (hi - lo)
        self.real_valued = self.left.real_valued and self.right.real_valued
        self.compact = self.left.compact or self.right.compact

    def _derivative(self, t, n):
        total = 0
        for k in range(n + 1):
            total = total + comb(n, k) * self.left.derivative(t, k) * self.right.derivative(t, n - k)
        return total


class Shift(TestFunction):
    """g(t - a)"""

    family = 'shift'

    def __init__(self, g: TestFunction, a: float):
        self.base = g
        self.offset = float(a)
        self.center = g.center + self.offset
        self.support_radius = g.support_radius
        self.real_valued = g.real_valued
        self.compact = g.compact

    def _derivative(self, t, n):
        return self.base.derivative(t - self.offset, n)


class Scale(TestFunction):
    """lambda^{-1} g(t / lambda)"""

    family = 'scale'

    def __init__(self, g: TestFunction, lam: float):
        if not lam > 0:
            raise PreconditionError(f"scale factor must be positive, got {lam}")
        self.base = g
        self.lam = float(lam)
        self.center = self.lam * g.center
        self.support_radius = self.lam * g.support_radius
        self.real_valued = g.real_valued
        self.compact = g.compact

    def _derivative(self, t, n):
        return self.base.derivative(t / self.lam, n) / self.lam ** (n + 1)


class Conjugate(TestFunction):
    family = 'conjugate'

    def __init__(self, g: TestFunction):
        self.base = g
        self.center = g.center
        self.support_radius = g.support_radius
        self.real_valued = g.real_valued
        self.compact = g.compact

    def conj(self) -> TestFunction:
        return self.base

    def _derivative(self, t, n):
        return np.conj(self.base.derivative(t, n))


class Derivative(TestFunction):
    family = 'derivative'

    def __init__(self, g: TestFunction, order: int = 1):
        if order < 0:
            raise PreconditionError("derivative order must be nonnegative")
        self.base = g
        self.order = int(order)
        self.center = g.center
        self.support_radius = g.support_radius
        self.real_valued = g.real_valued
        self.compact = g.compact

    def _derivative(self, t, n):
        _check_order(n + self.order)
        return self.base.derivative(t, n + self.order)


class Gaussian(TestFunction):
    """exp(-x^2/2), x = (t - center)/sigma; not compactly supported, diagnostics only"""

    family = 'gaussian'
    compact = False

    def __init__(self, sigma: float = 1.0, center: float = 0.0, width: float = 8.5):
        self.sigma = float(sigma)
        self.center = float(center)
        # window beyond which the values drop below 1e-15
        self.support_radius = width * self.sigma

    def _derivative(self, t, n):
        x = (t - self.center) / self.sigma
        coef = np.zeros(n + 1)
        coef[n] = 1.0
        return (-1.0 / self.sigma) ** n * hermite_e.hermeval(x, coef) * np.exp(-0.5 * x * x)


class FunctionProfile(TestFunction):
    """Arbitrary vectorized callable with a declared support, e.g. an autocorrelation"""

    family = 'profile'

    def __init__(self, func: Callable[[np.ndarray], np.ndarray], center: float = 0.0, radius: float = 1.0,
                 derivative: Optional[Callable[[np.ndarray, int], np.ndarray]] = None,
                 real_valued: bool = True, compact: bool = True):
        self.func = func
        self.derivative_func = derivative
        self.center = float(center)
        self.support_radius = float(radius)
        self.real_valued = real_valued
        self.compact = compact

    def _derivative(self, t, n):
        if n == 0:
            return np.asarray(self.func(t))
        if self.derivative_func is None:
            raise PreconditionError("this profile carries no derivative evaluator")
        return np.asarray(self.derivative_func(t, n))


def derivative(g: TestFunction, n: int = 1) -> TestFunction:
    return Derivative(g, n)


def shift(g: TestFunction, a: float) -> TestFunction:
    return Shift(g, a)


def scale(g: TestFunction, lam: float) -> TestFunction:
    """g_lambda(t) = lambda^{-1} g(t/lambda), supported in lambda * supp g"""
    return Scale(g, lam)


def scaled_family(g: TestFunction, scales: Sequence[float]) -> Tuple[TestFunction, ...]:
    """Dilations g_d(t) = d^{-1} g(t/d); ||g_d||_{d,M} does not depend on d"""
    return tuple(Scale(g, d) for d in scales)
