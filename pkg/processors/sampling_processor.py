"""
Sampling Processor - Sampling and Wigner Tables
===============================================

Builds the sampling function of a kernel against conj(g) <> g and the
Wigner function of g, as tables ready for CSV output.
"""

from typing import Any, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from kernels.kernel import HomogeneousKernel, Kernel
from sampling.construct import SamplingFunction, sample_kernel, sampling_general, sampling_homogeneous
from sampling.wigner import s_grid, wigner
from testfn.functions import TestFunction
from utils.logger import setup_logger

SAMPLING_COLUMNS = ['s', 'f_re', 'f_im']


class SamplingProcessor:
    """
    Processor for the 'sampling' and 'wigner' commands
    """

    def __init__(self):
        """Initialize the sampling processor"""
        self.logger = setup_logger('sampling_processor')

    def process_sampling(self, kernel: Kernel, g: TestFunction, coefficient: Optional[Kernel] = None,
                         s_points: Optional[int] = None) -> Tuple[pd.DataFrame, Dict[str, Any]]:
        """
        Sampling function of kernel (times an optional coefficient) on an s grid

        Args:
            kernel (Kernel): K
            g (TestFunction): test function
            coefficient (Kernel, optional): C, multiplied pointwise with K
            s_points (int, optional): number of grid points across supp g

        Returns:
            tuple: (table with columns s, f_re, f_im; summary dict)
        """
        s = s_grid(g, s_points)
        f = self._construct(kernel, g, coefficient, s)
        table = pd.DataFrame({'s': f.s, 'f_re': np.real(f.samples), 'f_im': np.imag(f.samples)},
                             columns=SAMPLING_COLUMNS)
        summary = {
            'method': f.method,
            'error_estimate': f.error_estimate,
            'integral': f.integral(),
            'min_f_re': float(np.min(f.real)),
            'imag_residual': f.imag_residual,
        }
        self.logger.info(f"Sampling function via {f.method}: min Re f = {summary['min_f_re']:.6e}")
        return table, summary

    def _construct(self, kernel: Kernel, g: TestFunction, coefficient: Optional[Kernel],
                   s: np.ndarray) -> SamplingFunction:
        if coefficient is not None:
            return sampling_general(kernel, coefficient, g, s)
        if isinstance(kernel, HomogeneousKernel) and g.real_valued:
            return sampling_homogeneous(kernel.beta, g, s, amplitude=kernel.amplitude)
        return sample_kernel(kernel, g, s)

    def process_wigner(self, g: TestFunction, s_points: Optional[int] = None) -> Tuple[pd.DataFrame, Dict[str, Any]]:
        """
        Wigner function table with columns s, p, W and its negativity summary

        Args:
            g (TestFunction): test function
            s_points (int, optional): number of s grid points

        Returns:
            tuple: (table, summary dict)
        """
        s = None if s_points is None else g.grid(s_points)
        w = wigner(g, s)
        i, j = np.unravel_index(np.argmin(w.values), w.values.shape)
        max_w = float(np.max(w.values))
        summary = {
            'aliasing': w.aliasing,
            'imag_residual': w.imag_residual,
            'min_W': float(w.values[i, j]),
            'max_W': max_w,
            'min_location': [float(w.s[i]), float(w.p[j])],
            'relative_negativity': float(w.values[i, j]) / max_w if max_w > 0 else 0.0,
        }
        if g.compact and summary['min_W'] >= 0:
            self.logger.warning("no negative Wigner value on the grid; refine the s grid or widen the p grid")
        return w.to_frame(), summary
