"""
Processors, one per group of command-line subcommands
"""

from .bound_processor import BoundProcessor
from .sampling_processor import SamplingProcessor
from .mesoscopic_processor import MesoscopicProcessor
from .certify_processor import CertifyProcessor

__all__ = ['BoundProcessor', 'SamplingProcessor', 'MesoscopicProcessor', 'CertifyProcessor']
