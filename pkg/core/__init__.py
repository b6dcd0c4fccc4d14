"""
Command workflow coordination
"""

from .orchestrator import QIOrchestrator

__all__ = ['QIOrchestrator']
