"""
QI Orchestrator - Command Workflow Coordinator
==============================================

This module runs one command-line invocation: it loads the input specs,
hands them to the processor for the requested command, and writes the
artifacts through the report generator. Each handler returns the exit
status of the run: 0 when every assertion held, 1 when one failed.
"""

import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional

from data.loader import SpecLoader
from data.validator import RunConfig
from kernels.kernel import HomogeneousKernel, homogeneous_kernel
from processors.bound_processor import BoundProcessor
from processors.certify_processor import CertifyProcessor
from processors.mesoscopic_processor import MesoscopicProcessor
from processors.sampling_processor import SamplingProcessor
from reporting.reporter import ReportGenerator
from testfn.functions import StandardBump, TestFunction
from utils.errors import PreconditionError
from utils.logger import setup_logger
from utils.validators import validate_lambda_grid

DEFAULT_QEI_MASSES = (0.0, 1.0)


class QIOrchestrator:
    """
    Main orchestrator for qiope runs

    Coordinates spec loading, the per-command processors and report output.
    """

    def __init__(self, loader: Optional[SpecLoader] = None):
        """Initialize the orchestrator"""
        self.logger = setup_logger('orchestrator')
        self.loader = loader or SpecLoader()
        self.bound_processor = BoundProcessor()
        self.sampling_processor = SamplingProcessor()
        self.mesoscopic_processor = MesoscopicProcessor()
        self.certify_processor = CertifyProcessor()
        self.report_generator = ReportGenerator()
        self._handlers: Dict[str, Callable[[RunConfig], int]] = {
            'bound': self._handle_bound,
            'verify-qei': self._handle_verify_qei,
            'sampling': self._handle_sampling,
            'wigner': self._handle_wigner,
            'mesoscopic': self._handle_mesoscopic,
            'certify': self._handle_certify,
            'fps': self._handle_fps,
        }

    def run(self, config: RunConfig) -> int:
        """
        Run the requested command

        Args:
            config (RunConfig): validated run configuration

        Returns:
            int: exit status, 0 on success and 1 on a failed assertion
        """
        self.logger.info(f"Starting {config.command} operation")
        status = self._handlers[config.command](config)
        self.logger.info(f"{config.command} operation finished with status {status}")
        return status

    def _require(self, value: Any, name: str) -> Any:
        if value is None:
            raise PreconditionError(f"this command needs --{name}")
        return value

    def _test_function(self, source: Any, name: str) -> TestFunction:
        return self.loader.load_test_function(self._require(source, name), name)

    def _summarize(self, config: RunConfig, passed: bool, details: Dict[str, Any],
                   artifacts: Dict[str, str]):
        # results went to stdout already when no output path was given
        if config.out in (None, '-'):
            return
        report = self.report_generator.generate_report(config.command, passed, details, artifacts)
        self.report_generator.display_summary(report)

    def _handle_bound(self, config: RunConfig) -> int:
        g = self._test_function(config.g, 'g')
        masses = config.masses or [0.0 if config.mass is None else config.mass]
        report = self.bound_processor.process_bounds(g, masses)
        if not config.include_timings:
            report.pop('timings')
        path = self.report_generator.save_json(report, config.out)
        self._summarize(config, True, {'Q_g': report['Q_g'], 'c_g': report['c_g']}, {'bounds': path})
        return 0

    def _handle_verify_qei(self, config: RunConfig) -> int:
        g = self._test_function(config.g, 'g')
        if config.masses:
            masses = config.masses
        elif config.mass is not None:
            masses = [config.mass]
        else:
            masses = list(DEFAULT_QEI_MASSES)
        report = self.bound_processor.process_scan(g, masses, config.n_states, config.seed, config.threads)
        artifacts = {'report': self.report_generator.save_json(report.to_dict(config.include_timings), config.out)}
        if config.out not in (None, '-'):
            artifacts['states'] = self.report_generator.save_table(report.states, _sibling(config.out, 'states'))
        details = {'bound': report.bound, 'state_scan_min': report.state_scan_min, 'margin': report.margin,
                   'nontrivial': report.nontrivial}
        self._summarize(config, report.passed, details, artifacts)
        return 0 if report.passed else 1

    def _handle_sampling(self, config: RunConfig) -> int:
        g = self._test_function(config.g, 'g')
        kernel = self._kernel(config)
        coefficient = None if config.coefficient is None else self.loader.load_kernel(config.coefficient, 'coefficient')
        table, details = self.sampling_processor.process_sampling(kernel, g, coefficient, config.s_points)
        path = self.report_generator.save_table(table, config.out)
        self._summarize(config, True, details, {'sampling': path})
        return 0

    def _handle_wigner(self, config: RunConfig) -> int:
        g = self._test_function(config.g, 'g')
        table, details = self.sampling_processor.process_wigner(g, config.s_points)
        path = self.report_generator.save_table(table, config.out)
        self._summarize(config, True, details, {'wigner': path})
        return 0

    def _handle_mesoscopic(self, config: RunConfig) -> int:
        chi = StandardBump(1.0) if config.chi is None else self._test_function(config.chi, 'chi')
        f = self._test_function(config.f if config.f is not None else config.g, 'f')
        kernel = self._kernel(config)
        lambdas = validate_lambda_grid(self._require(config.lambda_grid, 'lambda-grid'), minimum_length=4)
        result, weights, details = self.mesoscopic_processor.process(chi, f, kernel, lambdas, config.threads)

        artifacts = {'convergence': self.report_generator.save_table(result.table, config.out)}
        to_file = config.out not in (None, '-')
        if to_file:
            artifacts['weights'] = self.report_generator.save_table(weights, _sibling(config.out, 'weights'))
        stream = sys.stdout if to_file else sys.stderr
        for name, ok in result.passed.items():
            slope = result.slopes[name]
            shown = 'floor' if slope is None else f'{slope:.3f}'
            print(f"{name}: {'PASS' if ok else 'FAIL'} (slope {shown}, expected {result.expected_exponent:g})",
                  file=stream)
        self._summarize(config, result.all_passed, details, artifacts)
        return 0 if result.all_passed else 1

    def _handle_certify(self, config: RunConfig) -> int:
        g = self._test_function(config.g, 'g')
        beta = config.beta
        if beta is None and config.kernel is not None:
            kernel = self.loader.load_kernel(config.kernel)
            if not isinstance(kernel, HomogeneousKernel):
                raise PreconditionError("certify works with homogeneous kernels only")
            beta = kernel.beta
        beta = self._require(beta, 'beta')
        certificate = self.certify_processor.process_certificate(beta, g)
        data = certificate.to_dict()
        data['g'] = g.describe()
        path = self.report_generator.save_json(data, config.out)
        self._summarize(config, True, {'status': certificate.status.value,
                                       'rule': certificate.rule.value if certificate.rule else None},
                        {'certificate': path})
        return 0

    def _handle_fps(self, config: RunConfig) -> int:
        coefficients = self._require(config.coeffs, 'coeffs')
        result = self.certify_processor.process_series(coefficients)
        line = f"positive={str(result['positive']).lower()}, n={result['n']}, d0={result['d0_exact']}"
        print(line)
        if result['positive']:
            print(f"root: [{', '.join(result['root'])}]")
        if config.out not in (None, '-'):
            path = self.report_generator.save_json(result, config.out)
            self._summarize(config, True, {'positive': result['positive']}, {'series': path})
        return 0

    def _kernel(self, config: RunConfig):
        if config.kernel is not None:
            return self.loader.load_kernel(config.kernel)
        if config.beta is not None:
            return homogeneous_kernel(config.beta)
        raise PreconditionError("this command needs --kernel or --beta")


def _sibling(path: str, suffix: str) -> str:
    p = Path(path)
    return str(p.with_name(f"{p.stem}_{suffix}.csv"))
