"""
Positivity Certificates - Sampling Functions of Homogeneous Kernels
===================================================================

The sampling function of (i(s' - i0))^beta against g <> g is pointwise
nonnegative when one of three sufficient conditions holds:

    (i)   -1 < beta <= 1 and g >= 0
    (ii)  beta = -1 and g real, where f = pi g^2
    (iii) -3 < beta < -1 and g log-concave on a connected support

For beta <= 0 the kernel is of positive type and f has a nonnegative
average. Every pointwise certificate is backed by a grid check of the
constructed f.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from kernels.kernel import homogeneous_kernel, smooth_kernel
from kernels.measures import homogeneous_measure
from numerics.spectral import nonuniform_transform
from numerics.quadrature import composite_nodes
from sampling.construct import SamplingFunction, sample_kernel, sampling_homogeneous
from sampling.wigner import wigner
from testfn.functions import TestFunction
from testfn.norms import l2_norm_squared
from utils.config import get_settings
from utils.errors import CertificationError, PreconditionError, QiopeError, VerificationError
from utils.logger import setup_logger
from utils.parallel import ordered_map

logger = setup_logger('positivity')


class CertificateStatus(str, Enum):
    CERTIFIED_POINTWISE = 'certified_pointwise'
    CERTIFIED_AVERAGE = 'certified_average'
    NOT_CERTIFIED = 'not_certified'


class CertificateRule(str, Enum):
    BETA_RANGE = 'beta_range_i'
    BETA_MINUS_ONE = 'beta_minus_one_ii'
    LOG_CONCAVE = 'log_concave_iii'
    AVERAGE = 'average_beta_nonpos'


@dataclass(frozen=True)
class Certificate:
    status: CertificateStatus
    beta: float
    rule: Optional[CertificateRule] = None
    witness: Optional[float] = None
    min_value: Optional[float] = None
    max_abs: Optional[float] = None
    # not certified, yet f >= 0 on the grid
    counterexample_candidate: bool = False

    @property
    def certified(self) -> bool:
        return self.status != CertificateStatus.NOT_CERTIFIED

    def to_dict(self) -> dict:
        return {
            'status': self.status.value,
            'beta': self.beta,
            'rule': self.rule.value if self.rule else None,
            'witness': self.witness,
            'min_value': self.min_value,
            'max_abs': self.max_abs,
            'counterexample_candidate': self.counterexample_candidate,
        }


def _grid(g: TestFunction, n_points: Optional[int] = None) -> np.ndarray:
    n_points = n_points or get_settings().numerics.positivity.grid_points
    return g.grid(n_points)


def _real_values(g: TestFunction, t: np.ndarray, n: int = 0) -> Optional[np.ndarray]:
    values = g.derivative(t, n)
    if np.iscomplexobj(values):
        if np.max(np.abs(np.imag(values))) > 0:
            return None
        values = np.real(values)
    return values


def _is_nonnegative(g: TestFunction, t: np.ndarray) -> bool:
    values = _real_values(g, t)
    return values is not None and bool(np.all(values >= 0))


def _positive_region(values: np.ndarray, floor: float = 1e-300) -> Tuple[int, int, bool]:
    """First and last index with g > floor and whether that set is one interval"""
    positive = np.nonzero(values > floor)[0]
    if positive.size == 0:
        return 0, -1, True
    first, last = positive[0], positive[-1]
    return first, last, bool(positive.size == last - first + 1)


def is_log_concave(g: TestFunction, n_points: Optional[int] = None, tol: Optional[float] = None) -> bool:
    """
    Whether g'' g - (g')^2 <= tol g^2 wherever g > 0

    Raises:
        PreconditionError: g is negative somewhere or its positive set is not an interval
    """
    tol = get_settings().numerics.positivity.log_concave_tol if tol is None else tol
    t = _grid(g, n_points)
    values = _real_values(g, t)
    if values is None or np.any(values < 0):
        raise PreconditionError("log-concavity is tested for nonnegative real g")
    first, last, connected = _positive_region(values)
    if not connected:
        raise PreconditionError("the support of g is not an interval")
    if last < first:
        return True
    # products of g and its derivatives stay normal floats above this level
    first, last, _ = _positive_region(values, 1e-150)
    if last < first:
        return True
    inside = slice(first, last + 1)
    g0 = values[inside]
    g1 = _real_values(g, t[inside], 1)
    g2 = _real_values(g, t[inside], 2)
    defect = g2 * g0 - g1 ** 2
    bad = defect > tol * g0 ** 2
    if bad.any():
        logger.debug(f"log-concavity fails at t = {t[inside][np.argmax(bad)]:.6g}")
    return not bool(bad.any())


def _sampling(beta: float, g: TestFunction, s: Optional[np.ndarray] = None) -> SamplingFunction:
    if g.real_valued:
        return sampling_homogeneous(beta, g, s)
    if beta == 0:
        return sample_kernel(smooth_kernel('1'), g, s)
    return sample_kernel(homogeneous_kernel(beta), g, s)


def _grid_check(f: SamplingFunction) -> Tuple[float, float, float]:
    """(min Re f, max |f|, location of the minimum)"""
    values = f.real
    index = int(np.argmin(values))
    return float(values[index]), float(np.max(np.abs(f.samples))), float(f.s[index])


def _matching_rule(beta: float, g: TestFunction) -> Optional[CertificateRule]:
    t = _grid(g)
    if -1 < beta <= 1 and _is_nonnegative(g, t):
        return CertificateRule.BETA_RANGE
    if beta == -1 and g.real_valued:
        return CertificateRule.BETA_MINUS_ONE
    if -3 < beta < -1 and _is_nonnegative(g, t):
        try:
            if is_log_concave(g):
                return CertificateRule.LOG_CONCAVE
        except PreconditionError as exc:
            logger.debug(f"rule (iii) does not apply: {exc}")
    return None


def certify_pointwise(beta: float, g: TestFunction, s: Optional[np.ndarray] = None) -> Certificate:
    """
    Pointwise positivity of the sampling function of (i(s' - i0))^beta against g <> g

    Returns:
        Certificate; uncertifiable inputs give not_certified, with the grid
        minimum of f recorded whenever f can be constructed

    Raises:
        CertificationError: a certified f fails its grid check
    """
    tol = get_settings().numerics.positivity.pointwise_tol
    rule = _matching_rule(beta, g)
    try:
        f = _sampling(beta, g, s)
        min_value, max_abs, location = _grid_check(f)
    except QiopeError as exc:
        if rule is not None:
            raise
        logger.warning(f"sampling function for beta={beta:g} could not be constructed: {exc}")
        return Certificate(CertificateStatus.NOT_CERTIFIED, float(beta))

    nonnegative = min_value >= -tol * max_abs
    if rule is None:
        if nonnegative:
            logger.info(f"beta={beta:g}: no rule applies although f >= 0 on the grid")
        return Certificate(CertificateStatus.NOT_CERTIFIED, float(beta), None,
                           None if nonnegative else location, min_value, max_abs, nonnegative)
    if not nonnegative:
        raise CertificationError(
            f"rule {rule.value} certified beta={beta:g} but f reaches {min_value:.3e} at s={location:.6g}")
    logger.info(f"beta={beta:g} certified via {rule.value}")
    return Certificate(CertificateStatus.CERTIFIED_POINTWISE, float(beta), rule, None, min_value, max_abs)


def spectral_average(beta: float, g: TestFunction) -> float:
    """(1/2 pi) int K~(p) |g~(p)|^2 dp for (i(s' - i0))^beta with beta < 0"""
    lo, hi = g.support
    nodes, weights = composite_nodes(np.linspace(lo, hi, 257), 16)
    values = g(nodes)
    p_limit = 0.8 * np.pi * nodes.size / (hi - lo)

    def square(p):
        return np.abs(nonuniform_transform(values, nodes, weights, p, sign=1.0)) ** 2

    result = homogeneous_measure(beta).integrate(square, panel_width=np.pi / max(abs(lo), abs(hi)), p_limit=p_limit)
    return float(np.real(result.values[0])) / (2 * np.pi)


def average_positivity(beta: float, g: TestFunction, s: Optional[np.ndarray] = None) -> float:
    """
    int f(s) ds for the sampling function of (i(s' - i0))^beta, nonnegative for beta <= 0

    Raises:
        PreconditionError: beta > 0, where the kernel is not of positive type
    """
    if beta > 0:
        raise PreconditionError(f"average positivity needs beta <= 0, got {beta}")
    total = _sampling(beta, g, s).integral()
    value = float(np.real(total))
    if value < 0:
        logger.warning(f"average of f is {value:.3e} for beta={beta:g}")
    return value


def certify(beta: float, g: TestFunction) -> Certificate:
    """Pointwise certificate when a rule applies, otherwise the average certificate for beta <= 0"""
    certificate = certify_pointwise(beta, g)
    if certificate.certified or beta > 0:
        return certificate
    average = average_positivity(beta, g)
    tol = get_settings().numerics.positivity.pointwise_tol
    scale = max(certificate.max_abs or 0.0, abs(average), 1e-300)
    if average < -tol * scale:
        return certificate
    return Certificate(CertificateStatus.CERTIFIED_AVERAGE, float(beta), CertificateRule.AVERAGE,
                       certificate.witness, certificate.min_value, certificate.max_abs,
                       certificate.counterexample_candidate)


def garding_scan(beta: float, chi: TestFunction, family: Sequence[TestFunction],
                 workers: Optional[int] = None) -> Tuple[float, pd.DataFrame]:
    """
    Empirical constant max over the family of -int chi f / ||g||_2^2, clipped at 0

    The maximum is a property of the family only; no universal constant is claimed.
    """
    if beta > 0:
        raise PreconditionError(f"garding_scan needs beta <= 0, got {beta}")
    if not family:
        raise PreconditionError("garding_scan needs a nonempty family")

    def one(item):
        index, g = item
        norm = l2_norm_squared(g)
        if norm == 0:
            return {'index': index, 'chi_pairing': 0.0, 'l2_squared': 0.0, 'ratio': 0.0}
        f = _sampling(beta, g)
        step = f.values.grid_step
        weights = np.full(f.s.size, step)
        weights[0] = weights[-1] = 0.5 * step
        pairing = float(np.real(np.sum(weights * chi(f.s) * f.samples)))
        return {'index': index, 'chi_pairing': pairing, 'l2_squared': norm, 'ratio': -pairing / norm}

    rows = ordered_map(one, list(enumerate(family)), desc='Garding scan', workers=workers)
    table = pd.DataFrame(rows, columns=['index', 'chi_pairing', 'l2_squared', 'ratio'])
    c_hat = max(0.0, float(table['ratio'].max()))
    return c_hat, table


@dataclass(frozen=True)
class HudsonResult:
    min_value: float
    location: Tuple[float, float]
    max_value: float

    @property
    def relative(self) -> float:
        return self.min_value / self.max_value if self.max_value > 0 else 0.0


def hudson_negativity(g: TestFunction, s: Optional[np.ndarray] = None, p: Optional[np.ndarray] = None,
                      n_sprime: Optional[int] = None) -> HudsonResult:
    """
    Grid minimum of the Wigner function of g and its (s, p) location

    Raises:
        VerificationError: a compactly supported g shows no negative value on the grid
    """
    w = wigner(g, s, p, n_sprime)
    i, j = np.unravel_index(np.argmin(w.values), w.values.shape)
    result = HudsonResult(float(w.values[i, j]), (float(w.s[i]), float(w.p[j])), float(np.max(w.values)))
    if not g.compact:
        logger.info(f"{g.family} is not compactly supported; Wigner minimum {result.min_value:.3e} is diagnostic")
        return result
    if result.min_value >= 0:
        raise VerificationError("no negative Wigner value found; refine the s grid or widen the p grid")
    return result


def certificate_table(certificates: List[Certificate]) -> pd.DataFrame:
    return pd.DataFrame([c.to_dict() for c in certificates])
