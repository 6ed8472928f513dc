"""Tests for sine-mode projection and series evaluation."""

import math

import numpy as np
import pytest
from scipy import integrate

from src.core.exceptions import ConfigError, DomainError
from src.core.models import Clock, DecayModel, GaussianProfile, ModalDecomposition, ScheduleConfig
from src.core.quadrature import composite_rule, integrate as gl_integrate
from src.core.spectral import (decay_clock, eval_standard_adiabatic, eval_standard_fixed,
                               modal_energy, project_profile, series, series_curvature)

pytestmark = pytest.mark.unit


class TestQuadrature:
    """Test the composite Gauss-Legendre rule."""

    def test_weights_sum_to_length(self):
        nodes, weights = composite_rule(0.0, 3.0, 64)
        assert weights.sum() == pytest.approx(3.0, rel=1e-14)
        assert np.all(np.diff(nodes) > 0)
        assert 0.0 < nodes[0] and nodes[-1] < 3.0

    def test_integrates_smooth_function(self):
        assert gl_integrate(np.sin, 0.0, math.pi, 32) == pytest.approx(2.0, rel=1e-13)


class TestProjectProfile:
    """Test projection of initial profiles onto the box modes."""

    def test_single_sine_mode(self):
        md = project_profile(lambda x: np.sin(math.pi * x / 10.0), 10.0, 8, 160, tail_tol=None)
        assert md.coefficients[0] == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(md.coefficients[1:], 0.0, atol=1e-12)

    def test_gaussian_coefficients_match_quad(self, gaussian_profile, figure_modes):
        for n in (1, 3, 10):
            reference, _ = integrate.quad(
                lambda x: gaussian_profile(x) * math.sin(n * math.pi * x / 10.0), 0.0, 10.0,
                epsabs=1e-14, epsrel=1e-13, limit=200)
            assert figure_modes.coefficients[n - 1] == pytest.approx(0.2 * reference, abs=1e-12)

    def test_even_modes_vanish_for_centered_profile(self, figure_modes):
        np.testing.assert_allclose(figure_modes.coefficients[1::2], 0.0, atol=1e-12)

    def test_reconstruction(self, gaussian_profile, figure_modes):
        x = np.linspace(0.0, 10.0, 101)
        np.testing.assert_allclose(eval_standard_fixed(figure_modes, x, 0.0), gaussian_profile(x),
                                   atol=1e-9)

    def test_tail_bound_recorded(self, figure_modes):
        assert 0.0 <= figure_modes.tail_bound < 1e-10
        assert figure_modes.n_max == 64
        assert figure_modes.kappa == 0.5

    def test_insufficient_quadrature(self, gaussian_profile):
        with pytest.raises(ConfigError):
            project_profile(gaussian_profile, 10.0, 64, 200)

    def test_truncation_inadequate(self):
        narrow = GaussianProfile(x0=5.0, sigma=0.05)
        with pytest.raises(ConfigError, match="truncation"):
            project_profile(narrow, 10.0, 16, 1024)

    def test_center_outside_box(self):
        with pytest.raises(DomainError):
            project_profile(GaussianProfile(x0=12.0, sigma=1.0), 10.0, 8, 160)


class TestSeriesEvaluation:
    """Test the fixed and adiabatic series evaluators."""

    def test_single_mode_decay(self, single_mode):
        t = 3.0
        expected = math.exp(-(math.pi * 0.5 / 10.0) ** 2 * t) * math.sin(math.pi * 0.3)
        assert eval_standard_fixed(single_mode, 3.0, t) == pytest.approx(expected, rel=1e-14)

    def test_walls_are_zero(self, figure_modes):
        values = eval_standard_fixed(figure_modes, np.array([0.0, 10.0]), 1.0)
        assert values[0] == 0.0
        assert values[1] == 0.0

    def test_scalar_in_scalar_out(self, single_mode):
        assert isinstance(eval_standard_fixed(single_mode, 2.0, 0.0), float)

    def test_outside_box_rejected(self, single_mode, figure_schedule):
        with pytest.raises(DomainError):
            eval_standard_fixed(single_mode, 10.5, 0.0)
        with pytest.raises(DomainError):
            eval_standard_adiabatic(single_mode, figure_schedule, 10.5, 1.0)

    def test_negative_time_rejected(self, single_mode):
        with pytest.raises(DomainError):
            eval_standard_fixed(single_mode, 1.0, -1.0)

    def test_adiabatic_reduces_to_fixed_without_motion(self, figure_modes):
        cfg = ScheduleConfig(epsilon=0.0)
        x = np.linspace(0.0, 10.0, 64)
        for t in (0.0, 0.5, 1.0):
            assert np.array_equal(eval_standard_adiabatic(figure_modes, cfg, x, t),
                                  eval_standard_fixed(figure_modes, x, t))

    def test_adiabatic_stretches_with_wall(self, single_mode, figure_schedule):
        t = 50.0
        L = 10.0 + 0.04 * t
        value = eval_standard_adiabatic(single_mode, figure_schedule, 0.5 * L, t)
        assert value == pytest.approx(math.exp(-(math.pi * 0.5) ** 2 * t / L ** 2), rel=1e-13)

    def test_doubling_truncation_changes_nothing(self, gaussian_profile):
        coarse = project_profile(gaussian_profile, 10.0, 64, 2048, kappa=0.5)
        fine = project_profile(gaussian_profile, 10.0, 128, 2048, kappa=0.5)
        x = np.linspace(0.0, 10.0, 401)
        for t in (0.0, 0.5, 5.0):
            a = eval_standard_fixed(coarse, x, t)
            b = eval_standard_fixed(fine, x, t)
            assert np.max(np.abs(a - b)) <= 1e-10 * np.max(np.abs(b))

    def test_maximum_principle_on_fixed_box(self, figure_modes):
        x = np.linspace(0.0, 10.0, 401)
        peaks = [float(np.max(eval_standard_fixed(figure_modes, x, t)))
                 for t in np.linspace(0.0, 200.0, 41)]
        assert all(later <= earlier + 1e-12 for earlier, later in zip(peaks, peaks[1:]))
        assert float(np.min(eval_standard_fixed(figure_modes, x, 3.0))) >= -1e-10

    def test_walls_vanish_for_random_decompositions(self, figure_schedule):
        rng = np.random.default_rng(19)
        for _ in range(20):
            md = ModalDecomposition.from_coefficients(rng.normal(size=int(rng.integers(1, 40))),
                                                      L_ref=10.0, kappa=0.5)
            t = rng.uniform(0.0, 100.0)
            L = 10.0 + 0.04 * t
            values = eval_standard_adiabatic(md, figure_schedule, np.array([0.0, L]), t)
            np.testing.assert_array_equal(values, 0.0)

    def test_curvature_matches_finite_difference(self, figure_modes):
        x = np.array([2.0, 5.0, 8.5])
        h = 1e-4
        s = 0.01
        numeric = (series(figure_modes, x + h, 10.0, s) - 2.0 * series(figure_modes, x, 10.0, s)
                   + series(figure_modes, x - h, 10.0, s)) / (h * h)
        np.testing.assert_allclose(series_curvature(figure_modes, x, 10.0, s), numeric,
                                   rtol=1e-5, atol=1e-7)


class TestDecayClock:
    """Test the literal and integrated decay clocks."""

    def test_literal(self, figure_schedule):
        s = decay_clock(figure_schedule, 20.0, Clock.STANDARD, DecayModel.LITERAL)
        assert s == pytest.approx(20.0 / 10.8 ** 2)

    def test_integrated_standard_closed_form(self, figure_schedule):
        s = decay_clock(figure_schedule, 20.0, Clock.STANDARD, DecayModel.INTEGRATED)
        reference, _ = integrate.quad(lambda t: 1.0 / (10.0 + 0.04 * t) ** 2, 0.0, 20.0)
        assert s == pytest.approx(reference, rel=1e-12)

    def test_integrated_fast_forward_matches_quad(self, figure_schedule):
        from src.core.schedule import wall_position

        t = 0.7
        s = decay_clock(figure_schedule, t, Clock.FAST_FORWARD, DecayModel.INTEGRATED)
        reference, _ = integrate.quad(
            lambda tp: 1.0 / wall_position(figure_schedule, tp, Clock.FAST_FORWARD) ** 2, 0.0, t,
            epsabs=1e-14, epsrel=1e-12)
        assert s == pytest.approx(reference, rel=1e-9)

    def test_models_agree_without_motion(self):
        cfg = ScheduleConfig(epsilon=0.0)
        for clock in Clock:
            assert decay_clock(cfg, 0.4, clock, DecayModel.LITERAL) == \
                pytest.approx(decay_clock(cfg, 0.4, clock, DecayModel.INTEGRATED), rel=1e-15)


class TestModalEnergy:
    """Test the Parseval energy."""

    def test_matches_quadrature(self, figure_modes):
        t = 5.0
        x = np.linspace(0.0, 10.0, 4001)
        u = eval_standard_fixed(figure_modes, x, t)
        assert modal_energy(figure_modes, t) == pytest.approx(integrate.simpson(u * u, x=x), rel=1e-8)

    def test_non_increasing(self, figure_modes):
        energies = [modal_energy(figure_modes, t) for t in np.linspace(0.0, 50.0, 26)]
        assert all(b <= a for a, b in zip(energies, energies[1:]))

    def test_single_mode(self):
        md = ModalDecomposition.from_coefficients([2.0], L_ref=4.0, kappa=1.0)
        assert modal_energy(md, 0.0) == pytest.approx(0.5 * 4.0 * 4.0)
