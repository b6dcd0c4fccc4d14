from typing import Tuple

import numpy as np

from numerics.quadrature import integrate
from testfn.functions import TestFunction
from utils.config import get_settings
from utils.errors import PreconditionError


def _check_support(g: TestFunction, d: float) -> None:
    if d <= 0:
        raise PreconditionError(f"d must be positive, got {d}")
    lo, hi = g.support
    if lo < -d * (1 + 1e-12) or hi > d * (1 + 1e-12):
        raise PreconditionError(f"support [{lo}, {hi}] of g exceeds (-{d}, {d})")


def l1_norm(g: TestFunction, n: int = 0, tol: float = 1e-10) -> float:
    """||g^{(n)}||_1, with the sign changes of g^{(n)} passed to the quadrature as breakpoints"""
    lo, hi = g.support
    if hi <= lo:
        return 0.0
    grid = np.linspace(lo, hi, get_settings().numerics.testfn.norm_grid_points)
    values = g.derivative(grid, n)
    if not np.any(values):
        return 0.0
    if np.iscomplexobj(values):
        breaks = None
    else:
        flips = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]
        breaks = list(0.5 * (grid[flips] + grid[flips + 1]))

    def integrand(t):
        return float(np.abs(g.derivative(np.array([t]), n)[0]))

    return float(integrate(integrand, (lo, hi), tol=tol, points=breaks, limit=1000))


def l2_norm_squared(g: TestFunction, n: int = 0, tol: float = 1e-12) -> float:
    lo, hi = g.support
    if hi <= lo:
        return 0.0
    return float(integrate(lambda t: float(np.abs(g.derivative(np.array([t]), n)[0]) ** 2), (lo, hi), tol=tol))


def sobolev_norm(g: TestFunction, d: float, M: int) -> float:
    """
    Scaled Sobolev norm ||g||_{d,M} = max_{0<=n<=M} d^n ||g^{(n)}||_1

    Raises:
        PreconditionError: support of g not inside (-d, d)
    """
    if M < 0:
        raise PreconditionError(f"M must be >= 0, got {M}")
    _check_support(g, d)
    return max(d ** n * l1_norm(g, n) for n in range(M + 1))


def l1_sum_bound_check(g: TestFunction, d: float, M: int) -> Tuple[float, float]:
    """(sum_{k<=M} ||g^{(k)}||_1, (M+1) max{1, d^{-M}} ||g||_{d,M}); callers assert lhs <= rhs"""
    _check_support(g, d)
    norms = [l1_norm(g, k) for k in range(M + 1)]
    lhs = float(sum(norms))
    sob = max(d ** k * v for k, v in enumerate(norms))
    rhs = (M + 1) * max(1.0, d ** (-M)) * sob
    return lhs, float(rhs)
