"""
Settings - Numerical Defaults and Limits
========================================

Loads configs/numerics.yaml and configs/limits.yaml into validated pydantic
models. Library functions take ``None`` for a tunable to mean "use the value
configured here". Run-level overrides are scoped to a settings_override
block and never touch the cached settings.
"""

import os
from contextlib import contextmanager
from contextvars import ContextVar
from functools import lru_cache
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

CONFIG_DIR = Path(__file__).resolve().parent.parent / 'configs'


class QuadratureSettings(BaseModel):
    tol: float = Field(1e-10, gt=0)
    max_subdivisions: int = Field(500, ge=50)
    oracle_panels: int = Field(64, ge=1)
    oracle_order: int = Field(32, ge=4)


class SpectralSettings(BaseModel):
    grid_points: int = Field(4096, ge=16)
    padding_factor: int = Field(4, ge=1)
    aliasing_fraction: float = 1e-6
    dft_points: int = Field(2049, ge=65)
    panel_order: int = Field(20, ge=4)
    check_order: int = Field(12, ge=2)
    jacobi_order: int = Field(24, ge=4)
    truncation_tol: float = 1e-14
    max_frequency_factor: float = Field(0.8, gt=0, le=1)


class ExtrapolationSettings(BaseModel):
    order: int = Field(4, ge=1)
    residual_floor: float = 1e-13


class BoundarySettings(BaseModel):
    eps_k_min: int = 4
    eps_k_max: int = 14
    knorm_im_points: int = Field(33, ge=3)
    knorm_re_points: int = Field(201, ge=3)
    knorm_re_range: Tuple[float, float] = (-1.0, 1.0)

    @field_validator('eps_k_max')
    @classmethod
    def _k_range(cls, v, info):
        k_min = info.data.get('eps_k_min', 0)
        if v - k_min < 2:
            raise ValueError('epsilon sequence needs at least 3 steps')
        return v


class TestFunctionSettings(BaseModel):
    max_derivative: int = Field(16, ge=12)
    norm_grid_points: int = Field(2001, ge=101)


class SamplingSettings(BaseModel):
    s_points: int = Field(129, ge=5)
    taylor_switch: float = Field(0.1, gt=0, lt=1)
    odd_integer_window: float = 1e-9
    positive_type_trials: int = Field(50, ge=1)
    positive_type_grid: int = Field(161, ge=11)
    positive_type_eps: float = Field(0.05, gt=0)
    wigner_s_points: int = Field(257, ge=5)
    wigner_p_points: int = Field(513, ge=5)
    wigner_p_max: float = Field(160.0, gt=0)


class FreeFieldSettings(BaseModel):
    omega_nodes: int = Field(160, ge=16)
    time_points: int = Field(2049, ge=65)
    scan_states: int = Field(50, ge=1)
    lorentzian_eps: List[float] = [0.04, 0.02, 0.01, 0.005, 0.0025]
    remainder_tol: float = 1e-8


class MesoscopicSettings(BaseModel):
    n_sub: int = Field(32, ge=4)
    slope_margin: float = 0.2
    residual_floor: float = 1e-9


class PositivitySettings(BaseModel):
    pointwise_tol: float = 1e-10
    log_concave_tol: float = 1e-9
    grid_points: int = Field(1001, ge=11)


class RunSettings(BaseModel):
    seed: int = 20240607


class NumericsSettings(BaseModel):
    quadrature: QuadratureSettings = QuadratureSettings()
    spectral: SpectralSettings = SpectralSettings()
    extrapolation: ExtrapolationSettings = ExtrapolationSettings()
    boundary: BoundarySettings = BoundarySettings()
    testfn: TestFunctionSettings = TestFunctionSettings()
    sampling: SamplingSettings = SamplingSettings()
    freefield: FreeFieldSettings = FreeFieldSettings()
    mesoscopic: MesoscopicSettings = MesoscopicSettings()
    positivity: PositivitySettings = PositivitySettings()
    run: RunSettings = RunSettings()


class ProcessingLimits(BaseModel):
    max_workers: int = Field(8, ge=1)
    progress_min_items: int = 4


class AdmissibleRanges(BaseModel):
    tol: Tuple[float, float] = (1e-14, 1e-4)
    mass: Tuple[float, float] = (0.0, 1000.0)
    beta: Tuple[float, float] = (-12.5, 2.0)
    # named lambda_ since lambda is a keyword
    lambda_: Tuple[float, float] = Field((1e-6, 100.0), alias='lambda')
    grid_points: Tuple[int, int] = (16, 65536)
    seed: Tuple[int, int] = (0, 2**32 - 1)


class SpectralLimits(BaseModel):
    max_growth_order: float = 16


class LimitsSettings(BaseModel):
    processing: ProcessingLimits = ProcessingLimits()
    admissible_ranges: AdmissibleRanges = AdmissibleRanges()
    spectral: SpectralLimits = SpectralLimits()


class Settings(BaseModel):
    numerics: NumericsSettings
    limits: LimitsSettings
    threads: Optional[int] = None


def _read_yaml(path: Path) -> dict:
    if not path.exists():
        return {}
    with open(path, 'r') as f:
        return yaml.safe_load(f) or {}


_override: ContextVar[Optional[Settings]] = ContextVar('qiope_settings_override', default=None)


@lru_cache(maxsize=1)
def _load_settings() -> Settings:
    """Load and cache the settings for this process"""
    load_dotenv(CONFIG_DIR / 'qiope.env')

    numerics = NumericsSettings(**_read_yaml(CONFIG_DIR / 'numerics.yaml'))
    limits = LimitsSettings(**_read_yaml(CONFIG_DIR / 'limits.yaml'))

    threads = os.environ.get('QIOPE_THREADS')
    return Settings(
        numerics=numerics,
        limits=limits,
        threads=int(threads) if threads else None,
    )


def get_settings() -> Settings:
    """Settings of the active override block, else the cached file settings"""
    override = _override.get()
    return override if override is not None else _load_settings()


def with_overrides(settings: Settings, tol: Optional[float] = None) -> Settings:
    """Copy of settings with run-level tolerance overrides applied"""
    if tol is None:
        return settings
    numerics = settings.numerics
    quadrature = numerics.quadrature.model_copy(update={'tol': tol})
    positivity = numerics.positivity.model_copy(update={'pointwise_tol': tol})
    numerics = numerics.model_copy(update={'quadrature': quadrature, 'positivity': positivity})
    return settings.model_copy(update={'numerics': numerics})


@contextmanager
def settings_override(tol: Optional[float] = None) -> Iterator[Settings]:
    """Make get_settings() return the overridden copy inside the block"""
    token = _override.set(with_overrides(get_settings(), tol))
    try:
        yield _override.get()
    finally:
        _override.reset(token)


def reset_settings() -> None:
    """Drop cached settings so the next get_settings() reloads the config files"""
    _load_settings.cache_clear()
