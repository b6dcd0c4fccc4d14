"""
Spectral Measures - Fourier-Side Representation of Kernels
==========================================================

A kernel with a spectral form is K(s') = (1/2 pi) int dK~(p) e^{-ips'}, where
dK~ = scale * (rho(p) dp + sum_j w_j delta(p - p_j)) with rho >= 0 and w_j > 0.

Integrals against the measure are computed on composite panels: a
Gauss-Jacobi panel that absorbs the edge behaviour (p - p0)^a of the density,
followed by Gauss-Legendre panels marched outward until the integrand is
negligible. A lower-order rule on the same panels provides the error estimate.
"""

from dataclasses import dataclass, field, replace
from math import gamma
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import roots_jacobi

from numerics.quadrature import composite_nodes, integrate
from utils.config import get_settings
from utils.errors import PreconditionError, SpectralTruncationError
from utils.logger import setup_logger

logger = setup_logger('measures')

Density = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class MeasureIntegral:
    values: np.ndarray
    error: np.ndarray
    p_max: float


@dataclass(frozen=True)
class SpectralMeasure:
    """Positive measure on [support_start, inf) times a complex prefactor"""
    density: Optional[Density] = None
    atoms: Tuple[Tuple[float, float], ...] = ()
    growth_bound: Tuple[float, float] = (0.0, 0.0)
    support_start: float = 0.0
    edge_exponent: float = 0.0
    scale: complex = 1.0
    cumulative_func: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)
    label: str = ''

    def __post_init__(self):
        for location, weight in self.atoms:
            if location < 0 or not weight > 0:
                raise PreconditionError(f"atoms need location >= 0 and weight > 0, got ({location}, {weight})")
        if self.density is not None and self.support_start < 0:
            raise PreconditionError("density must be supported in [0, inf)")
        if self.edge_exponent <= -1:
            raise PreconditionError("edge exponent must exceed -1 for a locally finite measure")

    @classmethod
    def zero(cls) -> 'SpectralMeasure':
        return cls(scale=0.0, label='zero')

    @property
    def is_zero(self) -> bool:
        return self.scale == 0 or (self.density is None and not self.atoms)

    def density_at(self, p) -> np.ndarray:
        """Unscaled density, zero below the support start"""
        p = np.asarray(p, dtype=float)
        if self.density is None:
            return np.zeros_like(p)
        out = np.zeros_like(p)
        inside = p > self.support_start
        if inside.any():
            out[inside] = self.density(p[inside])
        return out

    def values(self, p) -> np.ndarray:
        """Scaled density scale * rho(p)"""
        return self.scale * self.density_at(p)

    def smooth_part(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return self.density_at(p) / (p - self.support_start) ** self.edge_exponent

    def cumulative(self, p) -> np.ndarray:
        """Unscaled mass of [0, p]"""
        p = np.atleast_1d(np.asarray(p, dtype=float))
        atom_mass = np.array([sum(w for loc, w in self.atoms if loc <= x) for x in p])
        if self.density is None:
            return atom_mass
        if self.cumulative_func is not None:
            dens = np.where(p > self.support_start, self.cumulative_func(np.maximum(p, self.support_start)), 0.0)
        else:
            dens = np.array([
                integrate(lambda q: float(self.density_at(np.array([q]))[0]), (self.support_start, x))
                if x > self.support_start else 0.0
                for x in p
            ])
        return dens + atom_mass

    def integrate(self, func: Callable[[np.ndarray], np.ndarray], panel_width: float,
                  upper: Optional[float] = None, p_limit: float = np.inf,
                  tol: Optional[float] = None, atol: float = 0.0,
                  noise_floor: Optional[Callable[[np.ndarray], np.ndarray]] = None) -> MeasureIntegral:
        """
        int func(p) dK~(p) for a vectorized func returning (rows, nodes) or (nodes,)

        Args:
            func: integrand evaluated on arrays of frequencies
            panel_width: width of the Gauss-Legendre panels
            upper: finite upper limit; marched to convergence when None
            p_limit: frequencies beyond which func is not resolved (e.g. Nyquist)
            tol: relative truncation tolerance
            atol: absolute floor below which a block counts as negligible
            noise_floor: roundoff level of func at each frequency; blocks below it
                count as negligible and the accumulated level joins the error

        Raises:
            SpectralTruncationError: the integrand is still significant at p_limit
        """
        settings = get_settings().numerics.spectral
        tol = settings.truncation_tol if tol is None else tol
        if panel_width <= 0:
            raise PreconditionError("panel width must be positive")

        total = None
        check = None
        floor_total = 0.0

        def _accumulate(nodes, weights, weights_check=None, nodes_check=None):
            nonlocal total, check
            vals = np.atleast_2d(func(nodes))
            part = vals @ weights
            if nodes_check is not None:
                part_check = np.atleast_2d(func(nodes_check)) @ weights_check
            else:
                part_check = part
            total = part if total is None else total + part
            check = part_check if check is None else check + part_check
            return part

        for location, weight in self.atoms:
            if upper is None or location <= upper:
                _accumulate(np.array([location]), np.array([weight]))

        p_max = max((loc for loc, _ in self.atoms), default=0.0)
        if self.density is not None and (upper is None or upper > self.support_start):
            a = self.support_start
            e = self.edge_exponent
            first_end = a + panel_width if upper is None else min(a + panel_width, upper)
            half = 0.5 * (first_end - a)

            x, w = roots_jacobi(settings.jacobi_order, 0.0, e)
            xc, wc = roots_jacobi(max(settings.jacobi_order - 8, 4), 0.0, e)
            nodes = a + half * (1 + x)
            nodes_c = a + half * (1 + xc)
            weights = w * half ** (e + 1) * self.smooth_part(nodes)
            weights_c = wc * half ** (e + 1) * self.smooth_part(nodes_c)
            _accumulate(nodes, weights, weights_c, nodes_c)

            start = first_end
            quiet_blocks = 0
            block = 8
            last = np.zeros(1)
            while upper is None or start < upper:
                edges = start + panel_width * np.arange(block + 1)
                if upper is not None:
                    edges = np.unique(np.minimum(edges, upper))
                if edges[-1] > p_limit:
                    scale_now = np.max(np.abs(total)) if total is not None else 0.0
                    report = {'p_limit': p_limit, 'p_reached': float(start),
                              'last_block': float(np.max(np.abs(last))), 'total': float(scale_now)}
                    raise SpectralTruncationError(
                        f"integrand still significant at p={start:.4g} (resolution limit {p_limit:.4g}); "
                        f"enlarge the sampling grid", report)
                nodes, weights = composite_nodes(edges, settings.panel_order)
                nodes_c, weights_c = composite_nodes(edges, settings.check_order)
                dens = self.density_at(nodes)
                dens_c = self.density_at(nodes_c)
                last = _accumulate(nodes, weights * dens, weights_c * dens_c, nodes_c)
                floor_block = 0.0
                if noise_floor is not None:
                    floor_block = float(np.sum(np.abs(weights * dens) * noise_floor(nodes)))
                    floor_total += floor_block
                start = edges[-1]
                if upper is None:
                    size = np.max(np.abs(total))
                    if np.max(np.abs(last)) <= tol * size + atol + 2 * floor_block + 1e-300:
                        quiet_blocks += 1
                        if quiet_blocks >= 2:
                            break
                    else:
                        quiet_blocks = 0
            p_max = max(p_max, float(start))

        if total is None:
            return MeasureIntegral(np.zeros(1, dtype=complex), np.zeros(1), p_max)

        if floor_total > 0:
            logger.debug(f"Spectral march stopped at p={p_max:.4g} with roundoff level {floor_total:.3e}")
        error = np.abs(total - check) + tol * np.abs(total) + floor_total
        return MeasureIntegral(self.scale * total, np.abs(self.scale) * error, p_max)


def free_field_spectral_density(mass: float) -> SpectralMeasure:
    """
    Spectral density of the 3+1-dimensional free scalar field on the time axis

    rho(w) = sqrt(w^2 - m^2) / (4 pi^2) for w >= m, so that
    Delta_+(s') = int_m^inf rho(w) e^{-iws'} dw.
    """
    if mass < 0:
        raise PreconditionError(f"mass must be >= 0, got {mass}")
    m = float(mass)

    def density(w):
        return np.sqrt(np.maximum(w * w - m * m, 0.0)) / (4 * np.pi ** 2)

    def cumulative(p):
        root = np.sqrt(np.maximum(p * p - m * m, 0.0))
        if m == 0:
            return p * p / (8 * np.pi ** 2)
        return (p * root - m * m * np.log((p + root) / m)) / (8 * np.pi ** 2)

    return SpectralMeasure(
        density=density,
        growth_bound=(1.0 / (8 * np.pi ** 2), 2.0),
        support_start=m,
        edge_exponent=0.5 if m > 0 else 1.0,
        cumulative_func=cumulative,
        label=f'free_field(m={m})',
    )


def homogeneous_measure(beta: float, amplitude: complex = 1.0) -> SpectralMeasure:
    """K~(p) = amplitude * 2 pi p^{-beta-1} / Gamma(-beta) theta(p), beta < 0"""
    if not beta < 0:
        raise PreconditionError(f"homogeneous spectral form needs beta < 0, got {beta}")
    e = -beta - 1.0
    const = 2 * np.pi / gamma(-beta)

    def density(p):
        return const * p ** e

    def cumulative(p):
        return 2 * np.pi * p ** (-beta) / gamma(1 - beta)

    return SpectralMeasure(
        density=density,
        growth_bound=(2 * np.pi / gamma(1 - beta), -beta),
        support_start=0.0,
        edge_exponent=e,
        scale=amplitude,
        cumulative_func=cumulative,
        label=f'homogeneous(beta={beta})',
    )


def _density_convolution(m1: SpectralMeasure, m2: SpectralMeasure) -> Density:
    """(1/2 pi) int rho1(q) rho2(p - q) dq by Gauss-Jacobi with both edge exponents"""
    order = get_settings().numerics.spectral.jacobi_order
    e1, e2 = m1.edge_exponent, m2.edge_exponent
    a1, a2 = m1.support_start, m2.support_start
    # (1 - x)^{e2} from rho2, (1 + x)^{e1} from rho1
    x, w = roots_jacobi(order, e2, e1)

    def density(p):
        p = np.atleast_1d(np.asarray(p, dtype=float))
        length = np.maximum(p - a1 - a2, 0.0)
        half = 0.5 * length
        q = a1 + half[:, None] * (1 + x[None, :])
        s1 = m1.smooth_part(q)
        s2 = m2.smooth_part(p[:, None] - q)
        inner = (s1 * s2) @ w
        return half ** (e1 + e2 + 1) * inner / (2 * np.pi)

    return density


def convolve_measures(m1: SpectralMeasure, m2: SpectralMeasure,
                      max_growth: Optional[float] = None) -> SpectralMeasure:
    """Spectral measure of a product kernel: (1/2 pi) (K~1 * K~2)"""
    max_growth = get_settings().limits.spectral.max_growth_order if max_growth is None else max_growth
    if m1.is_zero or m2.is_zero:
        return SpectralMeasure.zero()

    order = m1.growth_bound[1] + m2.growth_bound[1]
    if order > max_growth:
        raise SpectralTruncationError(
            f"combined growth order {order} exceeds the supported maximum {max_growth}",
            {'growth_order_1': m1.growth_bound[1], 'growth_order_2': m2.growth_bound[1], 'max': max_growth},
        )

    pieces = []  # (start, exponent, density)
    if m1.density is not None and m2.density is not None:
        pieces.append((m1.support_start + m2.support_start,
                       m1.edge_exponent + m2.edge_exponent + 1.0,
                       _density_convolution(m1, m2)))
    for atoms, other in ((m1.atoms, m2), (m2.atoms, m1)):
        if other.density is None:
            continue
        for location, weight in atoms:
            def shifted(p, loc=location, wt=weight, meas=other):
                return wt * meas.density_at(np.asarray(p) - loc) / (2 * np.pi)
            pieces.append((location + other.support_start, other.edge_exponent, shifted))

    atoms = tuple(
        (l1 + l2, w1 * w2 / (2 * np.pi)) for l1, w1 in m1.atoms for l2, w2 in m2.atoms
    )

    density = None
    start = 0.0
    exponent = 0.0
    if pieces:
        start = min(piece[0] for piece in pieces)
        exponent = min(piece[1] for piece in pieces if piece[0] == start)
        if len({piece[0] for piece in pieces}) > 1:
            logger.warning("Product density has interior onsets; panel accuracy is reduced there")
        funcs = [piece[2] for piece in pieces]

        def density(p, funcs=funcs):
            return sum(np.asarray(f(p), dtype=float) for f in funcs)

    c1, n1 = m1.growth_bound
    c2, n2 = m2.growth_bound
    return SpectralMeasure(
        density=density,
        atoms=atoms,
        growth_bound=(c1 * c2 / (2 * np.pi), order),
        support_start=start,
        edge_exponent=exponent,
        scale=m1.scale * m2.scale,
        label=f'({m1.label})*({m2.label})',
    )


def with_scale(measure: SpectralMeasure, factor: complex) -> SpectralMeasure:
    return replace(measure, scale=measure.scale * factor)
