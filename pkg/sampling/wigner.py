"""
Wigner Functions - Phase-Space Form of the Diamond Product
==========================================================

W_g(s, p) = int ds' e^{ips'} conj(g(s + s'/2)) g(s - s'/2)

Rows of the diamond product are sampled on a uniform s' grid and transformed
with one matrix product, so every (s, p) entry is a fixed-order sum.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from numerics.quadrature import trapezoid_weights
from numerics.spectral import nonuniform_transform
from testfn.diamond import DiamondProduct
from testfn.functions import TestFunction
from utils.config import get_settings
from utils.logger import setup_logger

logger = setup_logger('wigner')


@dataclass(frozen=True)
class DiamondRows:
    """(conj g <> g)(s, s') on an (s, s') grid with trapezoid weights in s'"""
    s: np.ndarray
    sprime: np.ndarray
    weights: np.ndarray
    rows: np.ndarray

    @property
    def sprime_step(self) -> float:
        return float(self.sprime[1] - self.sprime[0])

    @property
    def nyquist(self) -> float:
        return np.pi / self.sprime_step


@dataclass(frozen=True)
class WignerFunction:
    s: np.ndarray
    p: np.ndarray
    values: np.ndarray
    aliasing: bool
    imag_residual: float = 0.0

    def p_marginal(self) -> np.ndarray:
        """int dp/(2 pi) W(s, p) by the trapezoid rule on the p grid"""
        w = trapezoid_weights(self.p.size, self.p[1] - self.p[0])
        return self.values @ w / (2 * np.pi)

    def s_marginal(self) -> np.ndarray:
        w = trapezoid_weights(self.s.size, self.s[1] - self.s[0])
        return w @ self.values

    def to_frame(self):
        S, P = np.meshgrid(self.s, self.p, indexing='ij')
        return pd.DataFrame({'s': S.ravel(), 'p': P.ravel(), 'W': self.values.ravel()})


def s_grid(g: TestFunction, n_points: Optional[int] = None) -> np.ndarray:
    n_points = n_points or get_settings().numerics.sampling.s_points
    return g.grid(n_points)


def diamond_rows(g: TestFunction, s: Optional[np.ndarray] = None, n_sprime: Optional[int] = None,
                 left: Optional[TestFunction] = None) -> DiamondRows:
    """Rows r_s(s') = conj(left(s + s'/2)) g(s - s'/2), left defaulting to g"""
    s = s_grid(g) if s is None else np.asarray(s, dtype=float)
    n_sprime = n_sprime or get_settings().numerics.spectral.dft_points
    left = g if left is None else left
    width = max(g.support[1] - g.support[0], left.support[1] - left.support[0])
    sprime = np.linspace(-width, width, n_sprime)
    prod = DiamondProduct(left.conj(), g)
    S, SP = np.meshgrid(s, sprime, indexing='ij')
    rows = prod(S, SP)
    return DiamondRows(s, sprime, trapezoid_weights(n_sprime, sprime[1] - sprime[0]), rows)


def wigner(g: TestFunction, s: Optional[np.ndarray] = None, p: Optional[np.ndarray] = None,
           n_sprime: Optional[int] = None) -> WignerFunction:
    """
    Wigner function of g on an (s, p) grid

    Args:
        g: test function (complex allowed; Gaussians use their numerical window)
        s: s grid, default the configured number of points across supp g
        p: p grid, default symmetric about 0 with the configured extent
        n_sprime: number of s' samples

    Returns:
        WignerFunction with real values; aliasing flags spectral content at the edge of the p grid
    """
    settings = get_settings().numerics.sampling
    if s is None:
        s = g.grid(settings.wigner_s_points)
    if p is None:
        p = np.linspace(-settings.wigner_p_max, settings.wigner_p_max, settings.wigner_p_points)
    p = np.asarray(p, dtype=float)
    data = diamond_rows(g, s, n_sprime)
    if np.max(np.abs(p)) > 0.8 * data.nyquist:
        logger.warning(f"p grid reaches {np.max(np.abs(p)):.4g}, beyond the s' grid resolution {data.nyquist:.4g}")

    transform = nonuniform_transform(data.rows, data.sprime, data.weights, p, sign=1.0)
    scale = max(np.max(np.abs(transform)), 1e-300)
    imag_residual = float(np.max(np.abs(transform.imag)) / scale)
    values = transform.real

    edge = np.abs(p) > 0.9 * np.max(np.abs(p))
    aliasing = bool(edge.any() and np.max(np.abs(values[:, edge])) > get_settings().numerics.spectral.aliasing_fraction * scale)
    if aliasing:
        logger.warning("Wigner function does not decay within the p grid; widen it")
    return WignerFunction(np.asarray(data.s), p, values, aliasing, imag_residual)
