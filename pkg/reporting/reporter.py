"""
Report Generator - Reporting and Output Module
==============================================

This module builds run summaries and writes the artifacts of every
command: CSV tables and JSON reports. Output is byte-stable for a fixed
configuration and seed: JSON keys are sorted, CSV rows end with a bare
newline and CSV floats use the %.12e format. JSON floats are rounded to
13 significant digits through %.12e and then written as the shortest
repr of the rounded value, so they stay JSON numbers: 1/3 is written as
0.3333333333333 and 2.0 as 2.0.
"""

import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from utils.logger import setup_logger

FLOAT_FORMAT = '%.12e'


def normalize(value: Any) -> Any:
    """
    JSON-ready copy of value with floats rounded through FLOAT_FORMAT

    numpy scalars and arrays become Python numbers and lists, complex
    numbers become [re, im] pairs, and non-finite floats become strings.
    """
    if isinstance(value, dict):
        return {str(k): normalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [normalize(v) for v in value]
    if isinstance(value, np.ndarray):
        return normalize(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [normalize(float(value.real)), normalize(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return str(value)
        return float(FLOAT_FORMAT % value)
    if hasattr(value, 'value') and isinstance(getattr(value, 'value'), str):
        return value.value
    return value


class ReportGenerator:
    """
    Report generator for command results

    Writes CSV/JSON artifacts to a path or to stdout and prints a short
    human-readable summary.
    """

    def __init__(self):
        """Initialize the report generator"""
        self.logger = setup_logger('report_generator')

    def generate_report(self, command: str, passed: bool, details: Dict[str, Any],
                        artifacts: Optional[Dict[str, str]] = None) -> Dict[str, Any]:
        """
        Summary of one command run

        Args:
            command: subcommand name
            passed: whether every assertion of the command held
            details: scalar results to show in the summary
            artifacts: output files written by the run

        Returns:
            dict: the summary
        """
        return {
            'command': command,
            'status': 'PASS' if passed else 'FAIL',
            'details': details,
            'artifacts': artifacts or {},
            'timestamp': pd.Timestamp.now().isoformat(),
        }

    def display_summary(self, report: Dict[str, Any]):
        """
        Display a formatted run summary

        Args:
            report (dict): summary from generate_report
        """
        print(f"\n{'=' * 50}")
        print("QIOPE SUMMARY")
        print(f"{'=' * 50}")
        print(f"Command: {report['command']}")
        for key, value in report['details'].items():
            print(f"{key}: {_short(value)}")
        for name, path in report['artifacts'].items():
            print(f"Output ({name}): {path}")
        print(f"Status: {report['status']}")
        print(f"Timestamp: {report['timestamp']}")
        print(f"{'=' * 50}")

    def to_json(self, data: Dict[str, Any]) -> str:
        return json.dumps(normalize(data), sort_keys=True, indent=2) + '\n'

    def to_csv(self, table: pd.DataFrame) -> str:
        buffer = io.StringIO()
        table.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
        return buffer.getvalue()

    def save_json(self, data: Dict[str, Any], file_path: Optional[str]) -> str:
        """
        Write a JSON report; None or '-' writes to stdout

        Raises:
            OSError: the path cannot be written
        """
        return self._write(self.to_json(data), file_path)

    def save_table(self, table: pd.DataFrame, file_path: Optional[str]) -> str:
        """
        Write a table as CSV; None or '-' writes to stdout

        Raises:
            OSError: the path cannot be written
        """
        return self._write(self.to_csv(table), file_path)

    def _write(self, text: str, file_path: Optional[str]) -> str:
        if file_path in (None, '-'):
            sys.stdout.write(text)
            sys.stdout.flush()
            return 'stdout'
        path = Path(file_path)
        self.logger.info(f"Saving results to {path}")
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', newline='') as f:
                f.write(text)
        except OSError as exc:
            self.logger.error(f"Error saving results to {path}: {exc}")
            raise
        self.logger.info(f"Results saved to {path}")
        return str(path)


def _short(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6e}"
    return str(value)
