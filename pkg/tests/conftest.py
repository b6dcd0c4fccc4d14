import os
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

# loggers are created at import time, so the log directory must be set first
os.environ.setdefault('QIOPE_LOG_DIR', tempfile.mkdtemp(prefix='qiope-logs-'))

from testfn.functions import StandardBump  # noqa: E402
from utils.config import reset_settings  # noqa: E402


@pytest.fixture(autouse=True)
def fresh_settings():
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def bump():
    return StandardBump(1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_bump(rng, d_range=(0.5, 1.5), center_range=(-0.3, 0.3)):
    """Real bump with random radius, centre and amplitude"""
    return StandardBump(rng.uniform(*d_range), rng.uniform(*center_range), rng.uniform(0.5, 2.0))
