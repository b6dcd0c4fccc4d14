"""
Tests for free-field bounds, Fock-state expectations and QEI scans
"""

import numpy as np
import pytest

from freefield import (
    FockStateTwo, FockTwoPoint, ModeFunction, fock_oracle_expectation, minimize_mixing, multi_species_bound,
    optimal_mixing, qei_bound, qei_scan, remainder_term, scaled_wick_bounds, time_grid,
    wick_square_bound, wick_square_bound_oracle, wick_square_expectation,
)
from freefield.fock import expectation_from_elements
from kernels import homogeneous_kernel
from sampling import VacuumTwoPoint, quadratic_form
from testfn.functions import StandardBump, scale
from testfn.norms import l2_norm_squared
from utils.errors import PreconditionError


class TestClosedForms:
    def test_massless_energy_bound(self, bump):
        expected = l2_norm_squared(bump, 2) / (16 * np.pi ** 2)
        assert qei_bound(bump, 0.0) == pytest.approx(expected, rel=1e-6)

    def test_massless_wick_bound(self, bump):
        expected = l2_norm_squared(bump, 1) / (8 * np.pi ** 2)
        assert wick_square_bound(bump, 0.0) == pytest.approx(expected, rel=1e-6)

    def test_mass_lowers_bounds(self, bump):
        assert 0 < qei_bound(bump, 1.0) < qei_bound(bump, 0.0)
        assert 0 < wick_square_bound(bump, 1.0) < wick_square_bound(bump, 0.0)

    def test_dilation_exponents(self, bump):
        narrow = scale(bump, 0.5)
        assert qei_bound(narrow, 0.0) == pytest.approx(0.5 ** -5 * qei_bound(bump, 0.0), rel=1e-6)
        assert wick_square_bound(narrow, 0.0) == pytest.approx(0.5 ** -3 * wick_square_bound(bump, 0.0), rel=1e-6)

    def test_scaled_table(self, bump):
        table = scaled_wick_bounds(bump, 0.0, [1.0, 0.5])
        assert list(table.columns) == ['lambda', 'c_g', 'qei']
        ratio = table['c_g'].iloc[1] / table['c_g'].iloc[0]
        assert ratio == pytest.approx(8.0, rel=1e-6)

    def test_multi_species(self, bump):
        q0, q1 = qei_bound(bump, 0.0), qei_bound(bump, 1.0)
        assert multi_species_bound(bump, [0.0]) == pytest.approx(q0, rel=1e-10)
        assert multi_species_bound(bump, [0.0, 0.0]) == pytest.approx(2 * q0, rel=1e-10)
        assert multi_species_bound(bump, [1.0, 0.0]) == pytest.approx(q0 + q1, rel=1e-8)
        assert multi_species_bound(bump, []) == 0.0

    def test_preconditions(self, bump):
        with pytest.raises(PreconditionError):
            qei_bound(StandardBump(1.0, amplitude=1j))
        with pytest.raises(PreconditionError):
            wick_square_bound(bump, -1.0)

    @pytest.mark.slow
    def test_position_space_oracle(self, bump):
        assert wick_square_bound_oracle(bump) == pytest.approx(wick_square_bound(bump, 0.0), rel=1e-5)

    @pytest.mark.slow
    def test_quadratic_form_reproduces_wick_bound(self, bump):
        # c_g pairs Delta_+ with 1/(i pi (s' - i0))
        kernel = homogeneous_kernel(-1.0, 1.0 / np.pi)
        value = quadratic_form(kernel, VacuumTwoPoint(0.0), bump)
        assert value == pytest.approx(wick_square_bound(bump, 0.0), rel=1e-4)


class TestMixing:
    def test_vacuum_is_optimal_without_coupling(self):
        result = minimize_mixing(0.0, 1.0)
        assert result.lam == 0.0
        assert result.min_value == 0.0

    def test_unbounded_direction(self):
        result = minimize_mixing(0.0, -2.0)
        assert result.lam is None
        assert result.min_value == -2.0

    def test_minimum_is_attained(self, rng):
        for _ in range(20):
            c = complex(rng.normal(), rng.normal())
            d = float(rng.uniform(0.0, 3.0))
            result = minimize_mixing(c, d)
            assert expectation_from_elements(result.lam, c, d) == pytest.approx(result.min_value, abs=1e-12)
            for lam in rng.normal(size=10) + 1j * rng.normal(size=10):
                assert expectation_from_elements(lam, c, d) >= result.min_value - 1e-12

    def test_optimal_mixing_respects_bound(self, bump):
        mode = ModeFunction.bump(0.0, (0.5, 4.0))
        result = optimal_mixing(bump, mode)
        assert result.min_value < 0
        assert result.min_value >= -wick_square_bound(bump, 0.0)


class TestFockStates:
    @pytest.fixture
    def state(self):
        mode = ModeFunction.bump(0.0, (1.0, 3.0), phase_slope=1.5, coefficients=(1.0, 0.5j)).discretized(8)
        return FockStateTwo(mode, 0.3 + 0.2j)

    def test_mode_normalized(self, state):
        assert state.mode.norm == pytest.approx(1.0, rel=1e-12)

    def test_oracle_agrees(self, state, bump):
        t = time_grid(-1.0, 1.0, 1025)
        smearing = lambda x: bump(x) ** 2
        direct = wick_square_expectation(state, smearing, t)
        oracle = fock_oracle_expectation(state, smearing, t, n_bins=8)
        assert direct == pytest.approx(oracle, rel=1e-8, abs=1e-14)

    def test_vacuum_expectation_vanishes(self, state, bump):
        vacuum = FockStateTwo(state.mode, 0.0)
        c_free = wick_square_expectation(vacuum, lambda x: bump(x) ** 2, time_grid(-1.0, 1.0, 513))
        assert c_free == 0.0

    def test_callable_needs_grid(self, state):
        with pytest.raises(PreconditionError):
            wick_square_expectation(state, lambda x: x)

    def test_remainder_vanishes(self, state, bump):
        assert remainder_term(state, bump) == 0.0

    @pytest.mark.slow
    def test_remainder_vanishes_on_random_states(self, rng, bump):
        for _ in range(10):
            mode = ModeFunction.random(rng, 0.0, (rng.uniform(0.5, 2.0), rng.uniform(2.5, 6.0))).discretized(8)
            state = FockStateTwo(mode, complex(rng.normal(), rng.normal()))
            assert remainder_term(state, bump) == 0.0

    @pytest.mark.slow
    def test_two_particle_data_adds_wick_square(self, state, bump):
        # Q_psi - Q_vacuum = <psi, :phi^2:(g^2) psi> for C = 1/(i pi (s' - i0))
        kernel = homogeneous_kernel(-1.0, 1.0 / np.pi)
        fock = quadratic_form(kernel, FockTwoPoint(state), bump)
        vacuum = quadratic_form(kernel, VacuumTwoPoint(0.0), bump)
        excess = wick_square_expectation(state, lambda x: bump(x) ** 2, time_grid(-1.0, 1.0, 1025))
        assert fock >= -1e-8
        assert fock - vacuum == pytest.approx(excess, rel=1e-3, abs=1e-4 * vacuum)


class TestScan:
    @pytest.mark.slow
    def test_full_scan(self, bump):
        report = qei_scan(bump, masses=(0.0, 1.0), n_states=50, seed=11)
        assert report.passed
        assert len(report.states) == 100
        for entry in report.entries:
            # nontriviality is reported, not required
            assert -1.0 - 1e-9 <= entry.nontriviality <= 0.0
        assert isinstance(report.to_dict()['nontrivial'], bool)

    def test_scan_passes(self, bump):
        report = qei_scan(bump, masses=(0.0, 1.0), n_states=4, seed=11)
        assert report.passed
        assert len(report.entries) == 2
        assert len(report.states) == 8
        assert set(report.states['mass']) == {0.0, 1.0}
        assert (report.states['margin'] >= -1e-9 * report.states['bound']).all()

    def test_scan_is_reproducible(self, bump):
        first = qei_scan(bump, masses=(0.0,), n_states=3, seed=5)
        second = qei_scan(bump, masses=(0.0,), n_states=3, seed=5)
        assert first.states.equals(second.states)

    def test_report_dict(self, bump):
        report = qei_scan(bump, masses=(0.0,), n_states=2, seed=5)
        data = report.to_dict()
        assert 'timings' not in data
        assert data['config']['seed'] == 5
        assert set(report.to_dict(include_timings=True)['timings']) == {'bounds', 'scan'}

    def test_complex_g_rejected(self):
        with pytest.raises(PreconditionError):
            qei_scan(StandardBump(1.0, amplitude=1j), n_states=1)
