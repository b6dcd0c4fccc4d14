"""
Free-Field Bounds - Energy Density and Wick Square
==================================================

Closed-form lower bounds for the free scalar field in 3+1 dimensions smeared
along a timelike line with g^2:

    Q[g]  = (1/16 pi^3) int_m^inf u^4 |g~(u)|^2 du          energy density
    c_g   = (1/pi) int_m^inf |g~(p)|^2 int_m^p rho(w) dw dp   Wick square

Every frequency integral runs on the composite panels of SpectralMeasure with
the transform of g evaluated directly at the quadrature nodes.
"""

from typing import Optional, Sequence

import numpy as np
import pandas as pd
from scipy.interpolate import make_interp_spline

from kernels.boundary import eval_boundary
from kernels.kernel import AnalyticClosureKernel
from kernels.measures import SpectralMeasure, free_field_spectral_density
from numerics.quadrature import composite_nodes
from numerics.spectral import nonuniform_transform
from testfn.functions import FunctionProfile, TestFunction, scale
from testfn.norms import l2_norm_squared
from utils.errors import PreconditionError
from utils.logger import setup_logger

logger = setup_logger('freefield')

ENERGY_PREFACTOR = 1.0 / (16 * np.pi ** 3)


class _Transform:
    """|g~(u)|^2 by direct transform from Gauss-Legendre nodes on supp g"""

    def __init__(self, g: TestFunction, panels: int = 256, order: int = 16):
        lo, hi = g.support
        self.nodes, self.weights = composite_nodes(np.linspace(lo, hi, panels + 1), order)
        self.values = g(self.nodes)
        self.p_limit = 0.8 * np.pi * self.nodes.size / (hi - lo)
        self.panel_width = np.pi / max(abs(lo), abs(hi), 1e-6)

    def square(self, u) -> np.ndarray:
        return np.abs(nonuniform_transform(self.values, self.nodes, self.weights, u, sign=1.0)) ** 2


def _require_real(g: TestFunction) -> None:
    if not g.real_valued:
        raise PreconditionError("the free-field bounds are stated for real-valued g")


def _power_weight(start: float, power: int = 4) -> SpectralMeasure:
    """Measure u^power du on [start, inf)"""
    return SpectralMeasure(density=lambda u: u ** power, growth_bound=(1.0, power + 1.0),
                           support_start=start, edge_exponent=float(power) if start == 0 else 0.0,
                           label=f'u^{power}')


def _energy_integral(g: TestFunction, start: float, upper: Optional[float], transform: _Transform,
                     atol: float) -> float:
    result = _power_weight(start).integrate(transform.square, panel_width=transform.panel_width,
                                            upper=upper, p_limit=transform.p_limit, atol=atol)
    return float(np.real(result.values[0]))


def qei_bound(g: TestFunction, mass: float = 0.0) -> float:
    """
    Energy-density bound Q[g] = (1/16 pi^3) int_m^inf u^4 |g~(u)|^2 du

    Raises:
        PreconditionError: g complex or m < 0
        SpectralTruncationError: the tail is not resolved by the transform nodes
    """
    _require_real(g)
    if mass < 0:
        raise PreconditionError(f"mass must be >= 0, got {mass}")
    transform = _Transform(g)
    # int_0^inf u^4 |g~|^2 = pi ||g''||^2 sets the absolute scale
    atol = 1e-14 * np.pi * l2_norm_squared(g, 2)
    return ENERGY_PREFACTOR * _energy_integral(g, float(mass), None, transform, atol)


def multi_species_bound(g: TestFunction, masses: Sequence[float]) -> float:
    """(1/16 pi^3) int_0^inf u^4 N(u) |g~(u)|^2 du with N(u) = #{j : m_j <= u}"""
    _require_real(g)
    masses = sorted(float(m) for m in masses)
    if not masses:
        return 0.0
    if masses[0] < 0:
        raise PreconditionError("masses must be >= 0")
    transform = _Transform(g)
    atol = 1e-14 * np.pi * l2_norm_squared(g, 2)
    total = 0.0
    for count, (start, stop) in enumerate(zip(masses, masses[1:] + [None]), start=1):
        if stop is not None and stop <= start:
            continue
        total += count * _energy_integral(g, start, stop, transform, atol)
    return ENERGY_PREFACTOR * total


def _cumulative_measure(mass: float) -> SpectralMeasure:
    """Measure int_m^p rho(w) dw dp on [m, inf)"""
    rho = free_field_spectral_density(mass)
    return SpectralMeasure(density=lambda p: rho.cumulative(p), growth_bound=(1.0, 3.0),
                           support_start=float(mass), edge_exponent=1.5 if mass > 0 else 2.0,
                           label=f'cumulative(m={mass:g})')


def wick_square_bound(g: TestFunction, mass: float = 0.0) -> float:
    """
    c_g = (1/pi) int_m^inf |g~(p)|^2 int_m^p rho(w) dw dp

    This is the Fourier-side form of int ds ds' Delta_+(s') (g<>g)(s,s') / (i pi (s' - i0)).
    """
    _require_real(g)
    if mass < 0:
        raise PreconditionError(f"mass must be >= 0, got {mass}")
    transform = _Transform(g)
    atol = 1e-14 * l2_norm_squared(g, 1)
    result = _cumulative_measure(mass).integrate(transform.square, panel_width=transform.panel_width,
                                                 p_limit=transform.p_limit, atol=atol)
    return float(np.real(result.values[0])) / np.pi


def autocorrelation_profile(g: TestFunction, n_points: int = 4001) -> FunctionProfile:
    """A(s') = int g(u + s') g(u) du as a quintic spline profile on [-2d, 2d]"""
    lo, hi = g.support
    t = np.linspace(lo, hi, n_points)
    step = t[1] - t[0]
    samples = g(t)
    corr = np.correlate(samples, samples, mode='full') * step
    lags = step * np.arange(-(n_points - 1), n_points)
    spline = make_interp_spline(lags, corr, k=5)
    width = hi - lo

    def profile(x):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) < width, spline(np.clip(x, -width, width)), 0.0)

    return FunctionProfile(profile, center=0.0, radius=width)


def wick_square_bound_oracle(g: TestFunction, k_range=(4, 10), order: int = 6) -> float:
    """
    c_g at m = 0 from the position-space double integral

    With Delta_+(s') = -1/(4 pi^2 (s' - i0)^2) the integrand reduces to
    (i / 4 pi^3) (s' - i0)^{-3} A(s'), paired by regularized boundary values.
    """
    _require_real(g)
    kernel = AnalyticClosureKernel(lambda z: z ** -3, singular_points=(0.0,), label='z^-3')
    pairing = eval_boundary(kernel, autocorrelation_profile(g), method='epsilon', order=order, k_range=k_range)
    return float(np.real(1j * pairing.value / (4 * np.pi ** 3)))


def scaled_wick_bounds(g: TestFunction, mass: float, lambdas: Sequence[float]) -> pd.DataFrame:
    """c_{g_lambda} and Q[g_lambda] over dilations g_lambda(t) = lambda^{-1} g(t/lambda)"""
    rows = []
    for lam in lambdas:
        g_lam = scale(g, lam)
        rows.append({'lambda': float(lam), 'c_g': wick_square_bound(g_lam, mass), 'qei': qei_bound(g_lam, mass)})
    return pd.DataFrame(rows, columns=['lambda', 'c_g', 'qei'])
