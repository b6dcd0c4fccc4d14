"""
Bound Processor - Free-Field Bounds and QEI Verification
========================================================

This module computes the energy-density bound Q[g] and the Wick-square
bound c_g of the free scalar field, and runs the random Fock-state scan
that checks c_g against optimally mixed states.
"""

import time
from typing import Any, Dict, Optional, Sequence

from freefield.bounds import multi_species_bound, qei_bound, wick_square_bound
from freefield.verification import QIReport, qei_scan
from testfn.functions import TestFunction
from utils.logger import setup_logger


class BoundProcessor:
    """
    Processor for the free-field commands

    Handles 'bound' (closed bounds for one or several masses) and
    'verify-qei' (state scan against the Wick-square bound).
    """

    def __init__(self):
        """Initialize the bound processor"""
        self.logger = setup_logger('bound_processor')

    def process_bounds(self, g: TestFunction, masses: Sequence[float]) -> Dict[str, Any]:
        """
        Q[g] and c_g for every mass, plus the multi-species energy bound

        Args:
            g (TestFunction): real test function; bounds refer to the smearing g^2
            masses (list): field masses, the first one is reported at top level

        Returns:
            dict: report with Q_g and c_g of the first mass and one entry per mass
        """
        self.logger.info(f"Computing bounds for masses {list(masses)}")
        timings: Dict[str, float] = {}
        species = []
        for mass in masses:
            start = time.perf_counter()
            entry = {'mass': float(mass), 'Q_g': qei_bound(g, float(mass)), 'c_g': wick_square_bound(g, float(mass))}
            timings[f'mass={float(mass):g}'] = time.perf_counter() - start
            self.logger.info(f"m={mass:g}: Q_g={entry['Q_g']:.6e}, c_g={entry['c_g']:.6e}")
            species.append(entry)

        report = {
            'g': g.describe(),
            'mass': species[0]['mass'],
            'Q_g': species[0]['Q_g'],
            'c_g': species[0]['c_g'],
            'species': species,
            'timings': timings,
        }
        if len(species) > 1:
            report['multi_species_Q'] = multi_species_bound(g, [e['mass'] for e in species])
        return report

    def process_scan(self, g: TestFunction, masses: Sequence[float], n_states: Optional[int] = None,
                     seed: Optional[int] = None, workers: Optional[int] = None) -> QIReport:
        """
        Random Fock-state scan against -c_g

        Args:
            g (TestFunction): real test function
            masses (list): masses to scan
            n_states (int, optional): modes per mass
            seed (int, optional): rng seed
            workers (int, optional): worker threads

        Returns:
            QIReport: per-mass margins and the per-state table
        """
        self.logger.info(f"Starting QEI scan over masses {list(masses)}")
        report = qei_scan(g, masses, n_states=n_states, seed=seed, workers=workers)
        status = 'passed' if report.passed else 'FAILED'
        self.logger.info(f"QEI scan {status}: worst margin {report.margin:.6e}")
        return report
