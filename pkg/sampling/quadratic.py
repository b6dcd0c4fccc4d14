"""
Quadratic Forms - Kernels Against Two-Point Data
================================================

Q = int int K(s') G(s, s') conj(g(s + s'/2)) g(s - s'/2) ds ds'

Two-point data are consumed on the Fourier side: a TwoPointData object
supplies Phi(p) such that Q = (1/2 pi) int dK~(p) Phi(p).
"""

from abc import ABC, abstractmethod
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.interpolate import make_interp_spline

from kernels.kernel import Kernel
from kernels.measures import free_field_spectral_density
from kernels.positive_type import is_positive_type
from numerics.quadrature import composite_nodes
from numerics.spectral import nonuniform_transform
from testfn.functions import TestFunction
from utils.errors import PreconditionError
from utils.logger import setup_logger

logger = setup_logger('quadratic')


class FourierSpline:
    """Cubic splines of g~(q) and |g~(q)|^2 on [-q_max, q_max], zero outside"""

    def __init__(self, g: TestFunction, q_max: Optional[float] = None, n_points: int = 8001):
        lo, hi = g.support
        width = hi - lo
        self.q_max = 400.0 / max(0.5 * width, 1e-12) if q_max is None else q_max
        self._nodes, self._weights = composite_nodes(np.linspace(lo, hi, 257), 16)
        self._values = g(self._nodes)
        self.q = np.linspace(-self.q_max, self.q_max, n_points)
        transform = nonuniform_transform(self._values, self._nodes, self._weights, self.q, sign=1.0)[0]
        self._square = make_interp_spline(self.q, np.abs(transform) ** 2, k=3)
        self._real = make_interp_spline(self.q, transform.real, k=3)
        self._imag = make_interp_spline(self.q, transform.imag, k=3)

    def _inside(self, q):
        q = np.asarray(q, dtype=float)
        return q, np.abs(q) <= self.q_max

    def square(self, q) -> np.ndarray:
        q, inside = self._inside(q)
        out = np.zeros_like(q)
        out[inside] = self._square(q[inside])
        return np.maximum(out, 0.0)

    __call__ = square

    def amplitude(self, q) -> np.ndarray:
        q, inside = self._inside(q)
        out = np.zeros(q.shape, dtype=complex)
        out[inside] = self._real(q[inside]) + 1j * self._imag(q[inside])
        return out

    def exact(self, q) -> np.ndarray:
        """g~(q) by direct transform, for arbitrary q"""
        q = np.atleast_1d(np.asarray(q, dtype=float))
        return nonuniform_transform(self._values, self._nodes, self._weights, q, sign=1.0)[0]


@lru_cache(maxsize=16)
def fourier_spline(g: TestFunction) -> FourierSpline:
    """FourierSpline of g with the default grid, kept for the most recent test functions"""
    return FourierSpline(g)


class TwoPointData(ABC):
    """Positive-definite two-point data G(s, s') given through its Fourier-side weight"""

    label: str = 'G'

    @abstractmethod
    def phi(self, p: np.ndarray, g: TestFunction) -> np.ndarray:
        """Phi(p) with Q = (1/2 pi) int dK~(p) Phi(p)"""

    def panel_width(self, g: TestFunction) -> float:
        lo, hi = g.support
        return np.pi / max(hi - lo, 1e-6)

    @property
    def is_zero(self) -> bool:
        return False


class VacuumTwoPoint(TwoPointData):
    """amplitude * Delta_+(t - u) for the free field of the given mass"""

    def __init__(self, mass: float = 0.0, amplitude: float = 1.0):
        if amplitude < 0:
            raise PreconditionError("two-point amplitude must be nonnegative")
        self.mass = float(mass)
        self.amplitude = float(amplitude)
        self.measure = free_field_spectral_density(mass)
        self.label = f'vacuum(m={mass:g})'

    @property
    def is_zero(self) -> bool:
        return self.amplitude == 0

    def spline(self, g: TestFunction) -> FourierSpline:
        return fourier_spline(g)

    def phi(self, p, g):
        p = np.atleast_1d(np.asarray(p, dtype=float))
        spline = self.spline(g)

        def integrand(w):
            return spline.square(p[:, None] + w[None, :])

        result = self.measure.integrate(integrand, panel_width=self.panel_width(g), upper=spline.q_max)
        return self.amplitude * np.real(result.values)


def quadratic_form(kernel: Kernel, data: TwoPointData, g: TestFunction) -> float:
    """
    int int K(s') G(s, s') (conj g <> g)(s, s') ds ds' for a certified positive-type kernel

    Raises:
        PreconditionError: K is not certified positive
    """
    certificate = is_positive_type(kernel)
    if not certificate.is_positive:
        raise PreconditionError(
            f"quadratic_form needs a certified positive-type kernel, '{kernel.label}' is {certificate.status.value}")
    if kernel.is_zero or data.is_zero:
        return 0.0
    measure = kernel.spectral
    result = measure.integrate(lambda p: data.phi(p, g), panel_width=data.panel_width(g))
    value = complex(result.values[0]) / (2 * np.pi)
    scale = max(abs(value), 1e-300)
    if abs(value.imag) > 1e-8 * scale:
        logger.warning(f"quadratic form carries an imaginary part {value.imag:.3g}")
    return float(value.real)
