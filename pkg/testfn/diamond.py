"""
Diamond Product - Centre-of-Mass / Difference Coordinates
=========================================================

(g1 <> g2)(s, s') = g1(s + s'/2) g2(s - s'/2). For g1, g2 supported in
(-d, d) the product vanishes for |s'| >= 2(d - |s|).
"""

from dataclasses import dataclass
from math import comb
from typing import Optional, Tuple

import numpy as np

from testfn.functions import TestFunction
from testfn.norms import sobolev_norm
from numerics.quadrature import trapezoid_weights


@dataclass(frozen=True)
class DiamondProduct:
    left: TestFunction
    right: TestFunction

    def __call__(self, s, sp) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        sp = np.asarray(sp, dtype=float)
        return self.left(s + 0.5 * sp) * self.right(s - 0.5 * sp)

    def sprime_derivative(self, s, sp, n: int) -> np.ndarray:
        """d^n/ds'^n of the product by Leibniz' rule on exact derivatives"""
        s = np.asarray(s, dtype=float)
        sp = np.asarray(sp, dtype=float)
        x = s + 0.5 * sp
        y = s - 0.5 * sp
        total = 0
        for r in range(n + 1):
            total = total + comb(n, r) * 0.5 ** r * (-0.5) ** (n - r) * \
                self.left.derivative(x, r) * self.right.derivative(y, n - r)
        return total

    def half_width(self, s) -> np.ndarray:
        """Half-length of the s' support at fixed s"""
        s = np.asarray(s, dtype=float)
        l_lo, l_hi = self.left.support
        r_lo, r_hi = self.right.support
        # s + s'/2 in left support and s - s'/2 in right support
        upper = np.minimum(2 * (l_hi - s), 2 * (s - r_lo))
        lower = np.maximum(2 * (l_lo - s), 2 * (s - r_hi))
        return np.where(upper > lower, np.maximum(upper, -lower), 0.0)

    @property
    def s_support(self) -> Tuple[float, float]:
        lo = 0.5 * (self.left.support[0] + self.right.support[0])
        hi = 0.5 * (self.left.support[1] + self.right.support[1])
        return lo, hi


def diamond(g1: TestFunction, g2: TestFunction) -> DiamondProduct:
    return DiamondProduct(g1, g2)


def diamond_norm_estimate(g1: TestFunction, g2: TestFunction, d: float, M: int,
                          n_points: Optional[int] = None) -> Tuple[float, float]:
    """
    (int ds ||(g1<>g2)(s,.)||_{2d,M}, (2^{M+1}-1) ||g1||_{d,M} ||g2||_{d,M})

    The left side is a trapezoid estimate on an (s, s') grid; callers assert lhs <= rhs.
    """
    n_points = n_points or 801
    prod = DiamondProduct(g1, g2)
    s = np.linspace(-d, d, n_points)
    sp = np.linspace(-2 * d, 2 * d, 2 * n_points - 1)
    S, SP = np.meshgrid(s, sp, indexing='ij')
    w_sp = trapezoid_weights(sp.size, sp[1] - sp[0])
    per_s = np.zeros(s.size)
    for n in range(M + 1):
        rows = np.abs(prod.sprime_derivative(S, SP, n)) @ w_sp
        per_s = np.maximum(per_s, (2 * d) ** n * rows)
    lhs = float(trapezoid_weights(s.size, s[1] - s[0]) @ per_s)
    rhs = (2 ** (M + 1) - 1) * sobolev_norm(g1, d, M) * sobolev_norm(g2, d, M)
    return lhs, float(rhs)
