"""
Spec Validator - Input Contract Validation Module
=================================================

Pydantic models for the JSON input contracts of the command line:
test-function specs (discriminated by ``family``), kernel specs
(discriminated by ``type``) and run-config files. Validation failures are
reported as SpecFormatError carrying the dotted path of the offending field.
"""

from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, field_validator

from utils.config import get_settings
from utils.errors import SpecFormatError
from utils.logger import setup_logger
from utils.validators import validate_range

ComplexSpec = Union[float, Tuple[float, float]]

COMMANDS = ('bound', 'sampling', 'wigner', 'verify-qei', 'mesoscopic', 'certify', 'fps')


def to_complex(value: ComplexSpec) -> complex:
    """JSON numbers or [re, im] pairs"""
    if isinstance(value, (tuple, list)):
        return complex(value[0], value[1])
    return complex(value)


class _Spec(BaseModel):
    model_config = ConfigDict(extra='forbid')


class BumpSpec(_Spec):
    family: Literal['bump', 'standard_bump']
    d: float = Field(1.0, gt=0)
    center: float = 0.0
    # "scale" is the amplitude of the bump, not a dilation (that is the
    # scale family with lambda); both spellings are accepted
    scale: Optional[ComplexSpec] = None
    amplitude: Optional[ComplexSpec] = None


class MollifiedPolynomialSpec(_Spec):
    family: Literal['mollified_polynomial']
    coefficients: List[ComplexSpec] = Field(min_length=1)
    d: float = Field(1.0, gt=0)
    center: float = 0.0


class GaussianSpec(_Spec):
    family: Literal['gaussian']
    sigma: float = Field(1.0, gt=0)
    center: float = 0.0


class SumSpec(_Spec):
    family: Literal['sum']
    terms: List['TestFunctionSpec'] = Field(min_length=1)
    coefficients: Optional[List[ComplexSpec]] = None

    @field_validator('coefficients')
    @classmethod
    def _matching_length(cls, v, info):
        terms = info.data.get('terms')
        if v is not None and terms is not None and len(v) != len(terms):
            raise ValueError(f'{len(v)} coefficients for {len(terms)} terms')
        return v


class ProductSpec(_Spec):
    family: Literal['product']
    factors: List['TestFunctionSpec'] = Field(min_length=1)


class ShiftSpec(_Spec):
    family: Literal['shift']
    g: 'TestFunctionSpec'
    a: float


class ScaleSpec(_Spec):
    model_config = ConfigDict(extra='forbid', populate_by_name=True)

    family: Literal['scale']
    g: 'TestFunctionSpec'
    lambda_: float = Field(alias='lambda', gt=0)


class DerivativeSpec(_Spec):
    family: Literal['derivative']
    g: 'TestFunctionSpec'
    order: int = Field(1, ge=0)


class ConjugateSpec(_Spec):
    family: Literal['conjugate']
    g: 'TestFunctionSpec'


TestFunctionSpec = Annotated[
    Union[BumpSpec, MollifiedPolynomialSpec, GaussianSpec, SumSpec, ProductSpec,
          ShiftSpec, ScaleSpec, DerivativeSpec, ConjugateSpec],
    Field(discriminator='family'),
]

for _model in (SumSpec, ProductSpec, ShiftSpec, ScaleSpec, DerivativeSpec, ConjugateSpec):
    _model.model_rebuild()


class HomogeneousSpec(_Spec):
    type: Literal['homogeneous']
    beta: float
    amplitude: ComplexSpec = 1.0


class FreeFieldSpec(_Spec):
    type: Literal['free_field_two_point', 'free_field']
    mass: float = Field(0.0, ge=0)


class SmoothSpec(_Spec):
    type: Literal['smooth']
    expr: str = Field(min_length=1)


class AnalyticSpec(_Spec):
    type: Literal['analytic']
    expr: str = Field(min_length=1)
    singular_points: List[float] = [0.0]


KernelSpec = Annotated[
    Union[HomogeneousSpec, FreeFieldSpec, SmoothSpec, AnalyticSpec],
    Field(discriminator='type'),
]


class RunConfig(BaseModel):
    """
    One command invocation: inputs, output path and numerical overrides

    Command-line flags are merged over run-config file values before this
    model is built, so flags win.
    """

    model_config = ConfigDict(extra='forbid', populate_by_name=True)

    command: Literal['bound', 'sampling', 'wigner', 'verify-qei', 'mesoscopic', 'certify', 'fps']
    g: Optional[Any] = None
    chi: Optional[Any] = None
    f: Optional[Any] = None
    coefficient: Optional[Any] = None
    kernel: Optional[Any] = None
    mass: Optional[float] = None
    masses: Optional[List[float]] = None
    beta: Optional[float] = None
    lambda_grid: Optional[List[float]] = None
    coeffs: Optional[List[Any]] = None
    seed: Optional[int] = None
    tol: Optional[float] = None
    s_points: Optional[int] = None
    n_states: Optional[int] = Field(None, ge=1)
    threads: Optional[int] = Field(None, ge=1)
    out: Optional[str] = None
    include_timings: bool = False

    @field_validator('mass', 'tol', 'seed', 'beta', 's_points')
    @classmethod
    def _admissible(cls, v, info):
        if v is None:
            return v
        ranges = get_settings().limits.admissible_ranges
        key = 'grid_points' if info.field_name == 's_points' else info.field_name
        return validate_range(info.field_name, v, getattr(ranges, key))

    @field_validator('masses')
    @classmethod
    def _admissible_masses(cls, v):
        if v is None:
            return v
        bounds = get_settings().limits.admissible_ranges.mass
        return [validate_range('masses', m, bounds) for m in v]

    @field_validator('lambda_grid')
    @classmethod
    def _admissible_lambdas(cls, v):
        if v is None:
            return v
        bounds = get_settings().limits.admissible_ranges.lambda_
        return [validate_range('lambda_grid', x, bounds) for x in v]


class SpecValidator:
    """
    Validator for JSON input specs

    Turns raw parsed JSON into validated pydantic models and maps every
    pydantic failure to a SpecFormatError naming the field.
    """

    _test_function = TypeAdapter(TestFunctionSpec)
    _kernel = TypeAdapter(KernelSpec)

    def __init__(self):
        self.logger = setup_logger('spec_validator')

    def validate_test_function(self, raw: Any, where: str = 'g') -> BaseModel:
        """
        Validate a test-function spec

        Args:
            raw: parsed JSON; the shorthands {"sum": [...]} and
                {"product": [...]} are accepted for composition nodes
            where: name of the input, used as the root of field paths

        Returns:
            the validated spec model

        Raises:
            SpecFormatError: the input mapping does not match the contract
        """
        return self._validate(self._test_function, _expand_shorthand(raw), where)

    def validate_kernel(self, raw: Any, where: str = 'kernel') -> BaseModel:
        return self._validate(self._kernel, raw, where)

    def validate_run_config(self, values: Dict[str, Any]) -> RunConfig:
        try:
            config = RunConfig(**values)
        except ValidationError as exc:
            raise _format_error(exc, 'config') from exc
        self.logger.info(f"Run config validated for command '{config.command}'")
        return config

    def _validate(self, adapter: TypeAdapter, raw: Any, where: str) -> BaseModel:
        try:
            return adapter.validate_python(raw)
        except ValidationError as exc:
            error = _format_error(exc, where)
            self.logger.error(str(error))
            raise error from exc


def _expand_shorthand(raw: Any) -> Any:
    """Rewrite {"sum": [...]} / {"product": [...]} into family-tagged nodes, recursively"""
    if isinstance(raw, list):
        return [_expand_shorthand(item) for item in raw]
    if not isinstance(raw, dict):
        return raw
    node = {key: _expand_shorthand(value) for key, value in raw.items()}
    if 'family' not in node:
        if 'sum' in node:
            node['family'] = 'sum'
            node['terms'] = node.pop('sum')
        elif 'product' in node:
            node['family'] = 'product'
            node['factors'] = node.pop('product')
    return node


def _format_error(exc: ValidationError, where: str) -> SpecFormatError:
    first = exc.errors()[0]
    path = '.'.join(str(part) for part in (where, *first['loc']))
    return SpecFormatError(first['msg'], field=path)
