"""
Tests for input spec validation and loading
"""

import pytest

from data import SpecLoader, SpecValidator
from data.validator import ScaleSpec, SumSpec
from kernels import AnalyticClosureKernel, HomogeneousKernel, SmoothKernel, SpectralKernel
from testfn.functions import Gaussian, Scale, StandardBump, Sum
from utils.errors import PreconditionError, SpecFormatError
from utils.validators import parse_coefficients, parse_number_list, validate_lambda_grid, validate_range


@pytest.fixture
def loader():
    return SpecLoader()


class TestValidator:
    def test_sum_shorthand(self):
        spec = SpecValidator().validate_test_function(
            {'sum': [{'family': 'bump'}, {'family': 'gaussian', 'sigma': 0.5}]})
        assert isinstance(spec, SumSpec)
        assert len(spec.terms) == 2

    def test_lambda_alias(self):
        spec = SpecValidator().validate_test_function({'family': 'scale', 'g': {'family': 'bump'}, 'lambda': 0.5})
        assert isinstance(spec, ScaleSpec)
        assert spec.lambda_ == 0.5

    def test_error_names_field(self):
        with pytest.raises(SpecFormatError) as exc:
            SpecValidator().validate_test_function({'family': 'bump', 'd': -1.0}, where='chi')
        assert exc.value.field.startswith('chi.')
        assert exc.value.field.endswith('.d')

    def test_unknown_key(self):
        with pytest.raises(SpecFormatError):
            SpecValidator().validate_test_function({'family': 'gaussian', 'width': 1.0})

    def test_sum_coefficient_count(self):
        with pytest.raises(SpecFormatError):
            SpecValidator().validate_test_function(
                {'family': 'sum', 'terms': [{'family': 'bump'}], 'coefficients': [1.0, 2.0]})

    def test_kernel_type(self):
        with pytest.raises(SpecFormatError):
            SpecValidator().validate_kernel({'type': 'lorentzian'})

    def test_run_config_rejects_unknown_option(self):
        with pytest.raises(SpecFormatError):
            SpecValidator().validate_run_config({'command': 'fps', 'colour': 'red'})

    def test_run_config_ranges(self):
        with pytest.raises(SpecFormatError):
            SpecValidator().validate_run_config({'command': 'bound', 'tol': 1.0})
        with pytest.raises(SpecFormatError):
            SpecValidator().validate_run_config({'command': 'sampling', 's_points': 4})
        config = SpecValidator().validate_run_config({'command': 'bound', 'tol': 1e-8, 'seed': 3})
        assert config.tol == 1e-8


class TestLoader:
    def test_inline_bump(self, loader):
        g = loader.load_test_function('{"family": "bump", "d": 0.5, "center": 0.25}')
        assert isinstance(g, StandardBump)
        assert g.support == pytest.approx((-0.25, 0.75))

    def test_scale_key_is_amplitude(self, loader):
        g = loader.load_test_function({'family': 'bump', 'scale': 2.0})
        assert g(0.0) == pytest.approx(2.0 * StandardBump(1.0)(0.0))

    def test_complex_amplitude(self, loader):
        g = loader.load_test_function({'family': 'bump', 'amplitude': [0.0, 1.0]})
        assert not g.real_valued

    def test_compositions(self, loader):
        g = loader.load_test_function({'sum': [{'family': 'bump'},
                                               {'family': 'scale', 'g': {'family': 'bump'}, 'lambda': 0.5}]})
        assert isinstance(g, Sum)
        assert isinstance(g.terms[1], Scale)

    def test_yaml_file(self, loader, tmp_path):
        path = tmp_path / 'g.yaml'
        path.write_text('family: gaussian\nsigma: 0.5\n')
        assert isinstance(loader.load_test_function(str(path)), Gaussian)

    def test_missing_file(self, loader, tmp_path):
        with pytest.raises(FileNotFoundError):
            loader.load_test_function(str(tmp_path / 'nope.json'))

    def test_malformed_json_position(self, loader):
        with pytest.raises(SpecFormatError, match='line 1'):
            loader.read('{"family": ', 'g')

    def test_inline_number(self, loader):
        assert loader.read('2.5') == 2.5

    @pytest.mark.parametrize('spec, kind', [
        ({'type': 'homogeneous', 'beta': -1.0, 'amplitude': [0.0, 1.0]}, HomogeneousKernel),
        ({'type': 'free_field_two_point', 'mass': 1.0}, SpectralKernel),
        ({'type': 'smooth', 'expr': 'exp(-s**2)'}, SmoothKernel),
        ({'type': 'analytic', 'expr': '1/z'}, AnalyticClosureKernel),
    ])
    def test_kernels(self, loader, spec, kind):
        assert isinstance(loader.load_kernel(spec), kind)

    def test_complex_kernel_amplitude(self, loader):
        kernel = loader.load_kernel({'type': 'homogeneous', 'beta': -2.0, 'amplitude': [0.0, 1.0]})
        assert kernel.amplitude == 1j

    def test_run_config_keys(self, loader, tmp_path):
        path = tmp_path / 'run.yaml'
        path.write_text('lambda-grid: [0.2, 0.1]\nseed: 4\n')
        assert loader.load_run_config(str(path)) == {'lambda_grid': [0.2, 0.1], 'seed': 4}

    def test_run_config_must_be_mapping(self, loader, tmp_path):
        path = tmp_path / 'run.yaml'
        path.write_text('- 1\n- 2\n')
        with pytest.raises(SpecFormatError):
            loader.load_run_config(str(path))


class TestParsers:
    def test_number_lists(self):
        assert parse_number_list('0.2, 0.1', 'lambda_grid') == [0.2, 0.1]
        assert parse_number_list('[0,1]', 'masses') == [0.0, 1.0]
        assert parse_number_list(None, 'masses') is None
        with pytest.raises(SpecFormatError):
            parse_number_list('0.2, x', 'lambda_grid')

    def test_coefficients(self):
        assert parse_coefficients('[1, "1/24"]') == [1, '1/24']
        with pytest.raises(SpecFormatError):
            parse_coefficients('{"a": 1}')

    def test_lambda_grid(self):
        assert validate_lambda_grid([0.4, 0.2, 0.1, 0.05], minimum_length=4) == [0.4, 0.2, 0.1, 0.05]
        with pytest.raises(PreconditionError):
            validate_lambda_grid([0.1, 0.2])
        with pytest.raises(PreconditionError):
            validate_lambda_grid([0.2, 0.1], minimum_length=4)

    def test_validate_range(self):
        assert validate_range('mass', 1.0, (0.0, 10.0)) == 1.0
        assert validate_range('mass', 0.0, (0.0, 10.0)) == 0.0
        with pytest.raises(PreconditionError, match='mass'):
            validate_range('mass', -0.5, (0.0, 10.0))
        with pytest.raises(PreconditionError):
            validate_range('tol', float('nan'), (1e-14, 1e-4))

    def test_run_config_checks_list_entries(self):
        with pytest.raises(SpecFormatError):
            SpecValidator().validate_run_config({'command': 'bound', 'masses': [0.0, -1.0]})
        with pytest.raises(SpecFormatError):
            SpecValidator().validate_run_config({'command': 'mesoscopic', 'lambda_grid': [0.2, 0.1, float('inf')]})
