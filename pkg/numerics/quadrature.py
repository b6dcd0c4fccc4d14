"""
Quadrature - Adaptive and Fixed Integration Rules
=================================================

Complex integrands are split into real and imaginary parts and each part is
handed to QUADPACK (scipy.integrate.quad, adaptive Gauss-Kronrod 21/10).
A composite Gauss-Legendre rule is kept as an independent second rule for
cross-checks.
"""

import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate as sp_integrate
from scipy.integrate import IntegrationWarning

from utils.config import get_settings
from utils.errors import IntegrationError, PreconditionError


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error: float
    evaluations: int = 0


def _quad_part(func: Callable[[float], float], a: float, b: float, tol: float, limit: int,
               points: Optional[Sequence[float]], weight: Optional[str], wvar) -> Tuple[float, float, int, str]:
    kwargs = dict(epsabs=tol, epsrel=tol, limit=limit, full_output=1)
    if points is not None and np.isfinite(a) and np.isfinite(b):
        inner = sorted(p for p in points if a < p < b)
        if inner:
            kwargs['points'] = inner
    if weight is not None:
        kwargs['weight'] = weight
        kwargs['wvar'] = wvar
        # QUADPACK forbids breakpoints together with weights
        kwargs.pop('points', None)

    with warnings.catch_warnings():
        warnings.simplefilter('ignore', IntegrationWarning)
        out = sp_integrate.quad(func, a, b, **kwargs)

    value, error, info = out[0], out[1], out[2]
    message = out[3] if len(out) > 3 else ''
    n_eval = int(info.get('neval', 0)) if isinstance(info, dict) else 0
    return value, error, n_eval, message


def integrate_with_error(f: Callable[[float], complex], interval: Tuple[float, float],
                         tol: Optional[float] = None, points: Optional[Sequence[float]] = None,
                         weight: Optional[str] = None, wvar=None, limit: Optional[int] = None,
                         strict: bool = True) -> QuadratureResult:
    """
    Integrate a scalar (possibly complex) function over a real interval

    Args:
        f: integrand, called with a float
        interval: (a, b), infinite endpoints allowed
        tol: absolute and relative tolerance
        points: interior breakpoints (finite intervals only)
        weight, wvar: QUADPACK weight function, e.g. ('alg', (alpha, 0))
        strict: raise IntegrationError when the tolerance is not met

    Returns:
        QuadratureResult with value and absolute error estimate
    """
    settings = get_settings().numerics.quadrature
    tol = settings.tol if tol is None else tol
    limit = settings.max_subdivisions if limit is None else limit
    a, b = interval
    if not b >= a:
        raise PreconditionError(f"interval must satisfy a <= b, got ({a}, {b})")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)

    if np.isfinite(a) and np.isfinite(b):
        x0 = 0.5 * (a + b)
    elif np.isfinite(a):
        x0 = a + 1.0
    elif np.isfinite(b):
        x0 = b - 1.0
    else:
        x0 = 0.0
    is_complex = np.iscomplexobj(f(x0))

    re, re_err, n_re, msg_re = _quad_part(lambda t: float(np.real(f(t))), a, b, tol, limit, points, weight, wvar)
    im, im_err, n_im, msg_im = 0.0, 0.0, 0, ''
    if is_complex:
        im, im_err, n_im, msg_im = _quad_part(lambda t: float(np.imag(f(t))), a, b, tol, limit, points, weight, wvar)

    value = complex(re, im) if is_complex else re
    error = float(np.hypot(re_err, im_err))
    message = msg_re or msg_im
    scale = max(abs(value), 1.0)
    if strict and (message and error > 10 * tol * scale):
        raise IntegrationError(
            f"quadrature on [{a}, {b}] did not converge: {message.strip().splitlines()[0]}",
            best_estimate=value, error_estimate=error,
        )
    return QuadratureResult(value, error, n_re + n_im)


def integrate(f: Callable[[float], complex], interval: Tuple[float, float],
              tol: Optional[float] = None, **kwargs) -> complex:
    """Adaptive integral of f over interval; see integrate_with_error"""
    return integrate_with_error(f, interval, tol=tol, **kwargs).value


def gauss_legendre_integrate(f: Callable[[np.ndarray], np.ndarray], interval: Tuple[float, float],
                             panels: Optional[int] = None, order: Optional[int] = None) -> complex:
    """Composite Gauss-Legendre rule with a vectorized integrand"""
    settings = get_settings().numerics.quadrature
    panels = settings.oracle_panels if panels is None else panels
    order = settings.oracle_order if order is None else order
    a, b = interval
    if not (np.isfinite(a) and np.isfinite(b)):
        raise PreconditionError("Gauss-Legendre rule needs a finite interval")

    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    total = np.sum(weights * f(nodes))
    return complex(total) if np.iscomplexobj(total) else float(total)


def composite_nodes(edges: np.ndarray, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on consecutive panels given by edges"""
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def trapezoid_weights(n: int, step: float) -> np.ndarray:
    w = np.full(n, step)
    w[0] = w[-1] = 0.5 * step
    return w
