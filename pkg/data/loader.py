"""
Spec Loader - Input Spec Loading Module
=======================================

This module reads test-function and kernel specs (inline JSON or a file
path) and run-config files (YAML or JSON), validates them against the
input contracts and builds the domain objects the processors work on.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import BaseModel

from data.validator import (
    AnalyticSpec, BumpSpec, ConjugateSpec, DerivativeSpec, FreeFieldSpec, GaussianSpec, HomogeneousSpec,
    MollifiedPolynomialSpec, ProductSpec, ScaleSpec, ShiftSpec, SmoothSpec, SpecValidator, SumSpec, to_complex,
)
from kernels.kernel import Kernel, analytic_kernel, free_field_kernel, homogeneous_kernel, smooth_kernel
from testfn.functions import (
    Conjugate, Derivative, Gaussian, MollifiedPolynomial, Product, Scale, Shift, StandardBump, Sum, TestFunction,
)
from utils.errors import SpecFormatError
from utils.logger import setup_logger

SpecInput = Union[str, Path, Dict[str, Any], list]


class SpecLoader:
    """
    Loader for command-line inputs

    Accepts inline JSON text, a path to a JSON/YAML file, or an already
    parsed object, and returns validated domain objects.
    """

    def __init__(self, validator: Optional[SpecValidator] = None):
        """Initialize the test-function and kernel loader"""
        self.logger = setup_logger('spec_loader')
        self.validator = validator or SpecValidator()

    def read(self, source: SpecInput, where: str = 'input') -> Any:
        """
        Parse inline JSON or the contents of a JSON/YAML file

        Args:
            source: inline JSON text, a file path, or a parsed object
            where: name of the input for diagnostics

        Returns:
            the parsed object

        Raises:
            FileNotFoundError: source names a file that does not exist
            SpecFormatError: the text is not valid JSON/YAML
        """
        if not isinstance(source, (str, Path)):
            return source
        text = str(source).strip()
        if text[:1] in ('{', '[') or _is_number(text):
            return self._parse_json(text, where, origin='inline')

        path = Path(text)
        if not path.is_file():
            self.logger.error(f"Input file not found: {path}")
            raise FileNotFoundError(f"{where}: no such file '{path}'")
        self.logger.info(f"Loading {where} from {path}")
        content = path.read_text()
        if path.suffix.lower() in ('.yaml', '.yml'):
            try:
                return yaml.safe_load(content)
            except yaml.YAMLError as exc:
                mark = getattr(exc, 'problem_mark', None)
                line = f" at line {mark.line + 1}" if mark is not None else ''
                raise SpecFormatError(f"invalid YAML{line}: {exc}", field=where) from exc
        return self._parse_json(content, where, origin=str(path))

    def load_test_function(self, source: SpecInput, where: str = 'g') -> TestFunction:
        spec = self.validator.validate_test_function(self.read(source, where), where)
        g = build_test_function(spec)
        self.logger.info(f"Loaded {where}: {g.family} with support {g.support}")
        return g

    def load_kernel(self, source: SpecInput, where: str = 'kernel') -> Kernel:
        spec = self.validator.validate_kernel(self.read(source, where), where)
        kernel = build_kernel(spec)
        self.logger.info(f"Loaded {where}: {kernel.variant} kernel '{kernel.label}'")
        return kernel

    def load_run_config(self, path: SpecInput) -> Dict[str, Any]:
        """
        Read a run-config file into a flat dict of option values

        Keys use the command-line spelling with dashes or underscores,
        e.g. lambda-grid or lambda_grid.
        """
        raw = self.read(path, 'config')
        if not isinstance(raw, dict):
            raise SpecFormatError("run config must be a mapping", field='config')
        return {str(key).replace('-', '_'): value for key, value in raw.items()}

    def _parse_json(self, text: str, where: str, origin: str) -> Any:
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            self.logger.error(f"Malformed JSON in {where} ({origin}) at line {exc.lineno}, column {exc.colno}")
            raise SpecFormatError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                                  field=where) from exc


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def build_test_function(spec: BaseModel) -> TestFunction:
    """Domain object for a validated test-function spec"""
    if isinstance(spec, BumpSpec):
        amplitude = spec.amplitude if spec.amplitude is not None else spec.scale
        amplitude = 1.0 if amplitude is None else _real_if_possible(to_complex(amplitude))
        return StandardBump(spec.d, spec.center, amplitude)
    if isinstance(spec, MollifiedPolynomialSpec):
        coefficients = [_real_if_possible(to_complex(c)) for c in spec.coefficients]
        return MollifiedPolynomial(coefficients, spec.d, spec.center)
    if isinstance(spec, GaussianSpec):
        return Gaussian(spec.sigma, spec.center)
    if isinstance(spec, SumSpec):
        coefficients = None if spec.coefficients is None else [to_complex(c) for c in spec.coefficients]
        return Sum([build_test_function(term) for term in spec.terms], coefficients)
    if isinstance(spec, ProductSpec):
        return Product([build_test_function(factor) for factor in spec.factors])
    if isinstance(spec, ShiftSpec):
        return Shift(build_test_function(spec.g), spec.a)
    if isinstance(spec, ScaleSpec):
        return Scale(build_test_function(spec.g), spec.lambda_)
    if isinstance(spec, DerivativeSpec):
        return Derivative(build_test_function(spec.g), spec.order)
    if isinstance(spec, ConjugateSpec):
        return Conjugate(build_test_function(spec.g))
    raise SpecFormatError(f"unsupported test-function spec {type(spec).__name__}", field='family')


def build_kernel(spec: BaseModel) -> Kernel:
    """Domain object for a validated kernel spec"""
    if isinstance(spec, HomogeneousSpec):
        return homogeneous_kernel(spec.beta, _real_if_possible(to_complex(spec.amplitude)))
    if isinstance(spec, FreeFieldSpec):
        return free_field_kernel(spec.mass)
    if isinstance(spec, SmoothSpec):
        return smooth_kernel(spec.expr)
    if isinstance(spec, AnalyticSpec):
        return analytic_kernel(spec.expr, tuple(spec.singular_points))
    raise SpecFormatError(f"unsupported kernel spec {type(spec).__name__}", field='type')


def _real_if_possible(value: complex) -> Union[float, complex]:
    return value.real if value.imag == 0 else value
