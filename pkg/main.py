"""
qiope - Main Entry Point
========================

Command-line entry point for quantum-inequality bounds from operator
product expansion data. It parses the command and its flags, merges them
over an optional run-config file, and hands the run to the orchestrator.

Exit status: 0 on success, 1 when a numerical assertion fails (QEI
margin, convergence, certificate grid check), 2 on input errors and 3 on
an internal error (a bug, logged with its traceback).
"""

import argparse
import sys
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from core.orchestrator import QIOrchestrator
from data.loader import SpecLoader
from data.validator import COMMANDS, SpecValidator
from utils.config import settings_override
from utils.errors import PreconditionError, QiopeError, SpecFormatError
from utils.logger import setup_logger
from utils.validators import parse_coefficients, parse_number_list

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def setup_argument_parser() -> argparse.ArgumentParser:
    """Setup command line argument parser"""
    parser = argparse.ArgumentParser(
        prog='qiope',
        description='Quantum-inequality bounds from operator product expansion data',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Energy-density and Wick-square bounds of the massless field
  python main.py bound --mass 0 --g bump.json

  # Sampling function of 1/(i(s'-i0)) against a bump
  python main.py sampling -g '{"family":"bump","d":1.0}' --beta -1 --out f.csv

  # Random Fock-state scan against the Wick-square bound
  python main.py verify-qei -g bump.json --masses 0,1 --seed 7 --out qei.json

  # Positivity of a truncated power series
  python main.py fps --coeffs "[1,0,-0.5,0,0.0416667]"
        """
    )

    parser.add_argument('command', choices=COMMANDS, help='Operation to perform')
    parser.add_argument('--g', '-g', help='Test-function spec: inline JSON or a file path')
    parser.add_argument('--chi', help='Local smearing chi for mesoscopic (default: standard bump on (-1, 1))')
    parser.add_argument('--f', help='Global profile f for mesoscopic (default: the --g spec)')
    parser.add_argument('--kernel', help='Kernel spec: inline JSON or a file path')
    parser.add_argument('--coefficient', help='Coefficient kernel C multiplying --kernel in sampling')
    parser.add_argument('--mass', type=float, help='Field mass')
    parser.add_argument('--masses', help='Comma-separated masses, e.g. 0,1')
    parser.add_argument('--beta', type=float, help='Exponent of the homogeneous kernel (i(s-i0))^beta')
    parser.add_argument('--lambda-grid', help='Strictly decreasing lambda values, e.g. 0.2,0.1,0.05,0.025')
    parser.add_argument('--coeffs', help='Series coefficients as a JSON array')
    parser.add_argument('--seed', type=int, help='Random seed for state scans')
    parser.add_argument('--tol', type=float, help='Tolerance override for quadrature and grid checks')
    parser.add_argument('--s-points', type=int, help='Number of s grid points')
    parser.add_argument('--n-states', type=int, help='Random states per mass in verify-qei')
    parser.add_argument('--threads', type=int, help='Worker threads (QIOPE_THREADS caps this)')
    parser.add_argument('--out', '-o', help='Output file; stdout when omitted')
    parser.add_argument('--config', help='YAML/JSON run-config file; flags win over its values')
    parser.add_argument('--include-timings', action='store_true', help='Add wall-clock timings to JSON reports')

    return parser


def build_run_values(args: argparse.Namespace, loader: SpecLoader) -> Dict[str, Any]:
    """Merge run-config file values with command-line flags; flags win"""
    values: Dict[str, Any] = loader.load_run_config(args.config) if args.config else {}
    values.pop('command', None)
    flags = vars(args).copy()
    flags.pop('config')
    for key, value in flags.items():
        if value is None or (key == 'include_timings' and not value):
            continue
        values[key] = value

    for key in ('masses', 'lambda_grid'):
        values[key] = parse_number_list(values.get(key), key)
    values['coeffs'] = parse_coefficients(values.get('coeffs'))
    return values


def main(argv: Optional[List[str]] = None) -> int:
    """Main execution function"""
    parser = setup_argument_parser()
    args = parser.parse_args(argv)

    load_dotenv('configs/qiope.env')

    logger = setup_logger('main')
    logger.info(f"qiope {args.command} starting...")

    try:
        loader = SpecLoader()
        config = SpecValidator().validate_run_config(build_run_values(args, loader))
        with settings_override(tol=config.tol):
            status = QIOrchestrator(loader).run(config)
    except (SpecFormatError, PreconditionError, FileNotFoundError, OSError) as e:
        logger.error(f"Input error: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except QiopeError as e:
        logger.error(f"Numerical check failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ASSERTION
    except Exception as e:
        logger.exception(f"Internal error in main execution: {e!r}")
        print(f"Internal error: {e!r}", file=sys.stderr)
        return EXIT_INTERNAL

    logger.info(f"qiope {args.command} finished with status {status}")
    return status


if __name__ == "__main__":
    sys.exit(main())
