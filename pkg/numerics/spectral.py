"""
Spectral - Fourier Transforms of Sampled Data
=============================================

The global convention is g~(u) = int dt e^{iut} g(t), with the inverse
carrying 1/(2 pi). Uniform grids go through numpy's FFT; arbitrary frequency
sets go through a trapezoid-rule nonuniform DFT evaluated as a matrix
product in fixed-size chunks.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from utils.config import get_settings
from utils.errors import PreconditionError
from utils.logger import setup_logger

logger = setup_logger('spectral')

VANISH_TOL = 1e-12


@dataclass(frozen=True)
class SampledFunction:
    """Complex samples on a uniform grid starting at grid_start"""
    samples: np.ndarray
    grid_start: float
    grid_step: float
    support_radius: float = np.inf

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if self.grid_step <= 0:
            raise PreconditionError(f"grid_step must be positive, got {self.grid_step}")
        if samples.ndim != 1 or samples.size < 2:
            raise PreconditionError("a sampled function needs at least 2 samples")
        object.__setattr__(self, 'samples', samples)
        if np.isfinite(self.support_radius):
            center = self.grid_start + 0.5 * self.grid_step * (samples.size - 1)
            outside = np.abs(self.grid - center) >= self.support_radius * (1 - 1e-12)
            if outside.any() and np.max(np.abs(samples[outside])) > VANISH_TOL:
                raise PreconditionError("samples do not vanish at the declared support boundary")

    @property
    def grid(self) -> np.ndarray:
        return self.grid_start + self.grid_step * np.arange(self.samples.size)

    @classmethod
    def from_callable(cls, func: Callable[[np.ndarray], np.ndarray], start: float, stop: float,
                      n_points: int, support_radius: float = np.inf) -> 'SampledFunction':
        t = np.linspace(start, stop, n_points)
        return cls(np.asarray(func(t)), float(start), float(t[1] - t[0]), support_radius)


@dataclass(frozen=True)
class Spectrum:
    frequencies: np.ndarray
    amplitudes: np.ndarray
    aliasing: bool
    # bookkeeping for the exact inverse
    grid_start: float
    grid_step: float
    n_samples: int


def spectral_transform(f: SampledFunction, padding_factor: Optional[int] = None) -> Spectrum:
    """
    Trapezoid-rule Fourier transform of uniformly sampled data

    Args:
        f: samples vanishing at the ends of the grid
        padding_factor: zero-padding multiplier (finer frequency spacing)

    Returns:
        Spectrum on strictly increasing frequencies 2 pi k / (N step)
    """
    settings = get_settings().numerics.spectral
    padding_factor = settings.padding_factor if padding_factor is None else padding_factor
    if padding_factor < 1:
        raise PreconditionError(f"padding_factor must be >= 1, got {padding_factor}")

    n = f.samples.size * padding_factor
    step = f.grid_step
    padded = np.zeros(n, dtype=complex)
    padded[:f.samples.size] = f.samples

    omega = 2.0 * np.pi * np.fft.fftfreq(n, d=step)
    # sum_j g_j e^{i u_k t_j}; ifft carries the 1/n we undo here
    amplitudes = step * n * np.fft.ifft(padded) * np.exp(1j * omega * f.grid_start)

    omega = np.fft.fftshift(omega)
    amplitudes = np.fft.fftshift(amplitudes)

    energy = np.abs(amplitudes) ** 2
    total = energy.sum()
    nyquist = np.pi / step
    aliasing = bool(total > 0 and energy[np.abs(omega) > 0.9 * nyquist].sum() > settings.aliasing_fraction * total)
    if aliasing:
        logger.warning("Spectrum carries significant energy near Nyquist; refine the grid")

    return Spectrum(omega, amplitudes, aliasing, f.grid_start, step, f.samples.size)


def inverse_transform(spectrum: Spectrum) -> SampledFunction:
    """Exact inverse of spectral_transform on the original grid"""
    n = spectrum.amplitudes.size
    omega = np.fft.ifftshift(spectrum.frequencies)
    amplitudes = np.fft.ifftshift(spectrum.amplitudes) * np.exp(-1j * omega * spectrum.grid_start)
    padded = np.fft.fft(amplitudes) / (spectrum.grid_step * n)
    return SampledFunction(padded[:spectrum.n_samples], spectrum.grid_start, spectrum.grid_step)


def nonuniform_transform(rows: np.ndarray, grid: np.ndarray, weights: np.ndarray,
                         frequencies: np.ndarray, sign: float = 1.0, chunk: int = 1024) -> np.ndarray:
    """
    sum_n weights_n rows[r, n] exp(sign i u_k grid_n) for every row r and frequency u_k

    Frequencies are processed in chunks so the exponential matrix stays small.
    Each output entry is produced by a single matrix product, so results do not
    depend on how callers split their work.
    """
    rows = np.atleast_2d(rows)
    weighted = rows * weights[None, :]
    frequencies = np.asarray(frequencies, dtype=float)
    out = np.empty((rows.shape[0], frequencies.size), dtype=complex)
    for start in range(0, frequencies.size, chunk):
        u = frequencies[start:start + chunk]
        phase = np.exp(sign * 1j * np.outer(grid, u))
        out[:, start:start + chunk] = weighted @ phase
    return out


def transform_noise_floor(rows: np.ndarray, grid: np.ndarray, weights: np.ndarray,
                          frequencies: np.ndarray) -> np.ndarray:
    """
    Roundoff level of nonuniform_transform at each frequency

    Summation contributes eps sqrt(N) sum |w r| and the rounded phases u t_n
    contribute eps |u| max|t| sum |w r|; the larger row sets the level.
    """
    rows = np.atleast_2d(rows)
    mass = float(np.max(np.abs(rows * weights[None, :]).sum(axis=1)))
    reach = float(np.max(np.abs(grid)))
    u = np.abs(np.asarray(frequencies, dtype=float))
    return np.finfo(float).eps * mass * (np.sqrt(grid.size) + u * reach)
