"""
Report output: CSV tables, JSON reports and run summaries
"""

from .reporter import ReportGenerator, normalize

__all__ = ['ReportGenerator', 'normalize']
