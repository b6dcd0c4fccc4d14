"""
Fock States - Vacuum Plus Two Particles in One Mode
===================================================

States psi = (Omega + lambda |2_h>) / sqrt(1 + |lambda|^2), with |2_h> the
normalized symmetric two-particle vector on a single mode h(w). With the
one-particle time profile

    H(t) = int_m^inf sqrt(rho(w)) h(w) e^{-iwt} dw

the Wick square smeared with f has matrix elements

    c = <Omega, :phi^2:(f) 2_h> = sqrt(2) int f H^2
    d = <2_h, :phi^2:(f) 2_h>  = 4 int f |H|^2

and expectation [2 Re(lambda c) + |lambda|^2 d] / (1 + |lambda|^2).
"""

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix

from kernels.measures import free_field_spectral_density
from numerics.extrapolation import extrapolate_to_zero
from numerics.quadrature import composite_nodes, trapezoid_weights
from numerics.spectral import nonuniform_transform
from sampling.quadratic import FourierSpline, TwoPointData, VacuumTwoPoint
from testfn.functions import TestFunction, bump_derivatives
from utils.config import get_settings
from utils.errors import PreconditionError, VerificationError
from utils.logger import setup_logger

logger = setup_logger('fock')

SmearingFunction = Union[TestFunction, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class ModeFunction:
    """
    One-particle mode h on the band [lo, hi] within [m, inf), stored at quadrature nodes

    values are normalized so that sum(weights |values|^2) = 1 unless h vanishes.
    """
    nodes: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    mass: float
    band: Tuple[float, float]
    label: str = 'h'

    @classmethod
    def from_callable(cls, func: Callable[[np.ndarray], np.ndarray], mass: float, band: Tuple[float, float],
                      n_nodes: Optional[int] = None, normalize: bool = True, label: str = 'h') -> 'ModeFunction':
        lo, hi = band
        if mass < 0:
            raise PreconditionError(f"mass must be >= 0, got {mass}")
        if lo < mass or not hi > lo:
            raise PreconditionError(f"band {band} must satisfy m <= lo < hi")
        n_nodes = n_nodes or get_settings().numerics.freefield.omega_nodes
        order = 20
        panels = max(1, n_nodes // order)
        nodes, weights = composite_nodes(np.linspace(lo, hi, panels + 1), order)
        values = np.asarray(func(nodes), dtype=complex)
        mode = cls(nodes, weights, values, float(mass), (float(lo), float(hi)), label)
        return mode.normalized() if normalize else mode

    @classmethod
    def bump(cls, mass: float, band: Tuple[float, float], phase_slope: float = 0.0,
             coefficients: Tuple[complex, ...] = (1.0,)) -> 'ModeFunction':
        """Bump over the band times a complex polynomial and a linear phase"""
        lo, hi = band
        center, radius = 0.5 * (lo + hi), 0.5 * (hi - lo)

        def func(w):
            x = (w - center) / radius
            poly = np.polyval(np.asarray(coefficients)[::-1], x)
            return bump_derivatives(x, 0)[0] * poly * np.exp(1j * phase_slope * x)

        return cls.from_callable(func, mass, band, label='bump')

    @classmethod
    def random(cls, rng: np.random.Generator, mass: float, band: Tuple[float, float]) -> 'ModeFunction':
        coefficients = tuple(rng.normal(size=3) + 1j * rng.normal(size=3))
        return cls.bump(mass, band, phase_slope=float(rng.uniform(-4, 4)), coefficients=coefficients)

    def discretized(self, n_bins: int) -> 'ModeFunction':
        """Midpoint-rule version on n_bins equal frequency bins"""
        lo, hi = self.band
        width = (hi - lo) / n_bins
        nodes = lo + width * (np.arange(n_bins) + 0.5)
        values = np.interp(nodes, self.nodes, self.values.real) + 1j * np.interp(nodes, self.nodes, self.values.imag)
        mode = ModeFunction(nodes, np.full(n_bins, width), values, self.mass, self.band, f'{self.label}[{n_bins}]')
        return mode.normalized()

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.weights * np.abs(self.values) ** 2)))

    def normalized(self) -> 'ModeFunction':
        norm = self.norm
        if norm == 0:
            return self
        return ModeFunction(self.nodes, self.weights, self.values / norm, self.mass, self.band, self.label)

    @property
    def sqrt_density(self) -> np.ndarray:
        return np.sqrt(free_field_spectral_density(self.mass).density_at(self.nodes))


@dataclass(frozen=True)
class FockStateTwo:
    """(Omega + lam |2_h>) / sqrt(1 + |lam|^2)"""
    mode: ModeFunction
    lam: complex = 0.0

    @property
    def normalization(self) -> float:
        return 1.0 + abs(self.lam) ** 2


@dataclass(frozen=True)
class TimeProfile:
    t: np.ndarray
    values: np.ndarray

    @property
    def step(self) -> float:
        return float(self.t[1] - self.t[0])

    def weights(self) -> np.ndarray:
        return trapezoid_weights(self.t.size, self.step)


@dataclass(frozen=True)
class MixingResult:
    lam: Optional[complex]
    min_value: float
    c: complex
    d: float


def time_grid(lo: float, hi: float, n_points: Optional[int] = None) -> np.ndarray:
    n_points = n_points or get_settings().numerics.freefield.time_points
    return np.linspace(lo, hi, n_points)


def mode_transform(mode: ModeFunction, t: np.ndarray) -> TimeProfile:
    """
    H(t) = int sqrt(rho(w)) h(w) e^{-iwt} dw on the given time grid

    Raises:
        PreconditionError: the band reaches beyond what the time grid resolves
    """
    t = np.asarray(t, dtype=float)
    nyquist = np.pi / (t[1] - t[0])
    if mode.band[1] > get_settings().numerics.spectral.max_frequency_factor * nyquist:
        raise PreconditionError(
            f"mode band up to {mode.band[1]:g} exceeds the time-grid resolution {nyquist:.4g}; refine the grid")
    weights = mode.weights * mode.sqrt_density
    values = nonuniform_transform(mode.values, mode.nodes, weights, t, sign=-1.0)[0]
    return TimeProfile(t, values)


def _smearing_values(f: SmearingFunction, t: np.ndarray) -> np.ndarray:
    return np.asarray(f(t))


def matrix_elements(profile: TimeProfile, f: SmearingFunction) -> Tuple[complex, float]:
    """(c, d) = (sqrt(2) int f H^2, 4 int f |H|^2) by the trapezoid rule"""
    fw = _smearing_values(f, profile.t) * profile.weights()
    c = np.sqrt(2.0) * np.sum(fw * profile.values ** 2)
    d = 4.0 * np.sum(fw * np.abs(profile.values) ** 2)
    return complex(c), float(np.real(d))


def expectation_from_elements(lam: complex, c: complex, d: float) -> float:
    return float((2 * np.real(lam * c) + abs(lam) ** 2 * d) / (1 + abs(lam) ** 2))


def wick_square_expectation(state: FockStateTwo, f: SmearingFunction, t: Optional[np.ndarray] = None) -> float:
    """<psi, :phi^2:(f) psi> for a smearing function f supported within the time grid"""
    if t is None:
        if not isinstance(f, TestFunction):
            raise PreconditionError("a time grid is required for callable smearing functions")
        t = time_grid(*f.support)
    c, d = matrix_elements(mode_transform(state.mode, t), f)
    return expectation_from_elements(state.lam, c, d)


def minimize_mixing(c: complex, d: float) -> MixingResult:
    """Minimum over lambda of [2 Re(lambda c) + |lambda|^2 d] / (1 + |lambda|^2)"""
    mu = 0.5 * (d - np.sqrt(d * d + 4 * abs(c) ** 2))
    if abs(c) > 0:
        return MixingResult(mu / c, float(mu), c, d)
    # c = 0: the vacuum (lambda = 0) when d >= 0, otherwise only approached as lambda -> inf
    if d >= 0:
        return MixingResult(0.0, 0.0, c, d)
    return MixingResult(None, float(d), c, d)


def optimal_mixing(g: TestFunction, mode: ModeFunction, mass: Optional[float] = None) -> MixingResult:
    """Minimal Wick-square expectation with smearing g^2 over the states built on one mode"""
    if mass is not None and mass != mode.mass:
        raise PreconditionError(f"mode mass {mode.mass} differs from requested mass {mass}")
    if not g.real_valued:
        raise PreconditionError("optimal_mixing smears with g^2 for real g")
    t = time_grid(*g.support)
    profile = mode_transform(mode, t)
    c, d = matrix_elements(profile, lambda x: g(x) ** 2)
    return minimize_mixing(c, d)


class FockBasis:
    """Occupation-number basis of n_modes bosonic modes truncated at total occupation max_total"""

    def __init__(self, n_modes: int, max_total: int = 2):
        self.n_modes = n_modes
        self.max_total = max_total
        states: List[Tuple[int, ...]] = []
        for total in range(max_total + 1):
            for combo in combinations_with_replacement(range(n_modes), total):
                occ = [0] * n_modes
                for j in combo:
                    occ[j] += 1
                states.append(tuple(occ))
        self.states = states
        self.index: Dict[Tuple[int, ...], int] = {s: i for i, s in enumerate(states)}
        self.dimension = len(states)
        self.create = [self._creation(j) for j in range(n_modes)]
        self.annihilate = [op.conj().T.tocsr() for op in self.create]

    def _creation(self, j: int) -> csr_matrix:
        rows, cols, data = [], [], []
        for col, state in enumerate(self.states):
            target = list(state)
            target[j] += 1
            row = self.index.get(tuple(target))
            if row is not None:
                rows.append(row)
                cols.append(col)
                data.append(np.sqrt(state[j] + 1))
        return coo_matrix((data, (rows, cols)), shape=(self.dimension, self.dimension), dtype=complex).tocsr()

    def vacuum(self) -> np.ndarray:
        vec = np.zeros(self.dimension, dtype=complex)
        vec[self.index[(0,) * self.n_modes]] = 1.0
        return vec


def fock_oracle_expectation(state: FockStateTwo, f: SmearingFunction, t: np.ndarray, n_bins: int = 8) -> float:
    """
    <psi, :phi^2:(f) psi> with explicit creation and annihilation matrices

    The field is discretized on n_bins midpoint bins of the mode band,
    phi(t) = sum_j v_j (a_j e^{-iw_j t} + a_j* e^{iw_j t}) with v_j = sqrt(rho_j dw_j),
    and the Fock space is truncated at two quanta, which is exact for these states.
    Compare with wick_square_expectation on FockStateTwo(mode.discretized(n_bins), lam).
    """
    mode = state.mode if state.mode.nodes.size == n_bins else state.mode.discretized(n_bins)
    n = mode.nodes.size
    basis = FockBasis(n, 2)
    v = np.sqrt(mode.weights) * mode.sqrt_density
    amplitudes = np.sqrt(mode.weights) * mode.values

    tw = trapezoid_weights(t.size, t[1] - t[0]) * _smearing_values(f, t)

    def smeared(u):
        return np.sum(tw[None, :] * np.exp(1j * np.outer(u, t)), axis=1)

    omega = mode.nodes
    plus = smeared((omega[:, None] + omega[None, :]).ravel()).reshape(n, n)
    diff = smeared((omega[:, None] - omega[None, :]).ravel()).reshape(n, n)
    minus = smeared(-(omega[:, None] + omega[None, :]).ravel()).reshape(n, n)

    op = csr_matrix((basis.dimension, basis.dimension), dtype=complex)
    for j in range(n):
        for k in range(n):
            vv = v[j] * v[k]
            op = op + vv * (plus[j, k] * (basis.create[j] @ basis.create[k])
                            + 2 * diff[j, k] * (basis.create[j] @ basis.annihilate[k])
                            + minus[j, k] * (basis.annihilate[j] @ basis.annihilate[k]))

    vacuum = basis.vacuum()
    excite = csr_matrix((basis.dimension, basis.dimension), dtype=complex)
    for j in range(n):
        excite = excite + amplitudes[j] * basis.create[j]
    two = excite @ (excite @ vacuum) / np.sqrt(2.0)
    psi = (vacuum + state.lam * two) / np.sqrt(state.normalization)
    return float(np.real(np.vdot(psi, op @ psi)))


class FockTwoPoint(TwoPointData):
    """Two-point function <psi, phi(t) phi(u) psi> of a FockStateTwo, on the Fourier side"""

    def __init__(self, state: FockStateTwo):
        self.state = state
        self.vacuum = VacuumTwoPoint(state.mode.mass)
        self.label = f'fock({state.mode.label}, lambda={state.lam})'

    def phi(self, p, g):
        p = np.atleast_1d(np.asarray(p, dtype=float))
        base = self.vacuum.phi(p, g)
        lam = self.state.lam
        if lam == 0:
            return base
        spline: FourierSpline = self.vacuum.spline(g)
        mode = self.state.mode
        weights = mode.weights * mode.sqrt_density * mode.values
        a = spline.amplitude(p[:, None] - mode.nodes[None, :]) @ weights
        u = np.conj(spline.amplitude(mode.nodes[None, :] + p[:, None])) @ weights
        excess = (2 * abs(lam) ** 2 * (np.abs(a) ** 2 + np.abs(u) ** 2)
                  + 2 * np.sqrt(2.0) * np.real(lam * a * u)) / self.state.normalization
        return base + excess


def normal_ordered_two_point(state: FockStateTwo, t: np.ndarray, u: np.ndarray) -> np.ndarray:
    """<psi, :phi(t) phi(u): psi> on matching arrays of times"""
    mode = state.mode
    weights = mode.weights * mode.sqrt_density
    flat_t, flat_u = np.ravel(t), np.ravel(u)
    h_t = nonuniform_transform(mode.values, mode.nodes, weights, flat_t, sign=-1.0)[0]
    h_u = nonuniform_transform(mode.values, mode.nodes, weights, flat_u, sign=-1.0)[0]
    lam = state.lam
    pair = np.sqrt(2.0) * (lam * h_t * h_u + np.conj(lam * h_t * h_u))
    number = 2 * abs(lam) ** 2 * (np.conj(h_t) * h_u + np.conj(h_u) * h_t)
    return (np.real(pair + number) / state.normalization).reshape(np.shape(t))


def remainder_term(state: FockStateTwo, g: TestFunction, mass: Optional[float] = None) -> float:
    """
    R_{psi,g} = int ds ds' <R(s, s')> (g<>g)(s, s') / (i pi (s' - i0)) for real g

    R(s, s') = :phi(s + s'/2) phi(s - s'/2): - :phi(s)^2: is even in s' and
    vanishes at s' = 0, so the even part of the kernel, a delta function,
    gives exactly zero. The value is returned as 0 after two numerical checks:
    evenness of R on a symmetric grid and the regularized kernel
    1/(i pi (s' - i eps)) on a symmetric grid, extrapolated to eps -> 0.

    Raises:
        VerificationError: either check exceeds the configured tolerance
    """
    if not g.real_valued:
        raise PreconditionError("remainder_term is defined here for real g")
    if mass is not None and mass != state.mode.mass:
        raise PreconditionError(f"state mass {state.mode.mass} differs from requested mass {mass}")
    settings = get_settings().numerics.freefield
    tol = settings.remainder_tol
    if state.lam == 0:
        return 0.0

    lo, hi = g.support
    width = hi - lo
    s_nodes, s_weights = composite_nodes(np.linspace(lo, hi, 17), 8)

    # symmetric s' nodes, geometrically refined towards 0
    edges = np.concatenate(([0.0], np.geomspace(1e-5, width, 40)))
    half_nodes, half_weights = composite_nodes(edges, 10)
    sp_nodes = np.concatenate((-half_nodes[::-1], half_nodes))
    sp_weights = np.concatenate((half_weights[::-1], half_weights))

    S, SP = np.meshgrid(s_nodes, sp_nodes, indexing='ij')
    t, u = S + 0.5 * SP, S - 0.5 * SP
    diagonal = normal_ordered_two_point(state, s_nodes, s_nodes)
    remainder = normal_ordered_two_point(state, t, u) - diagonal[:, None]

    # R(s, s') = R(s, -s'): the delta part of the kernel sees only R(s, 0) = 0
    scale = max(1.0, float(np.max(np.abs(remainder))))
    asymmetry = float(np.max(np.abs(remainder - remainder[:, ::-1])))
    if asymmetry > tol * scale:
        raise VerificationError(f"remainder is not even in s' (deviation {asymmetry:.3g})")

    weight_grid = np.outer(s_weights, sp_weights) * remainder * g(t) * g(u)
    pairs = []
    for eps in settings.lorentzian_eps:
        kernel = 1.0 / (1j * np.pi * (SP - 1j * eps))
        pairs.append((eps, complex(np.sum(weight_grid * kernel))))
    result = extrapolate_to_zero(pairs)
    reference = max(1.0, abs(pairs[0][1]))
    if abs(result.limit) > tol * reference:
        raise VerificationError(
            f"regularized remainder extrapolates to {result.limit:.3g}, expected 0 within {tol:g}")
    logger.debug(f"Remainder verified: asymmetry {asymmetry:.2e}, regularized limit {abs(result.limit):.2e}")
    return 0.0
