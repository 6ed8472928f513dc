"""Tests for loading key=value configs and presets."""

import os

import pytest

from src.core.exceptions import ConfigError
from src.core.models import Clock, DecayModel, ProfileBlock, RunConfig, RunMode, SolverChoice
from src.services.config_loader import (RunConfigLoader, apply_overrides, known_keys, load_config,
                                        load_preset)

pytestmark = pytest.mark.unit


def write(temp_dir, text, name="run.cfg"):
    path = os.path.join(temp_dir, name)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)
    return path


class TestLoadConfig:
    """Test parsing and validation of config files."""

    def test_sample_config(self, sample_config_file):
        cfg = load_config(sample_config_file)
        assert cfg.schedule.epsilon == 0.04
        assert cfg.numerics.M == 64
        assert cfg.output.sample_times == (0.0, 0.5, 1.0)
        assert cfg.profile.x0 == 5.0

    def test_empty_file_gives_defaults(self, temp_dir):
        cfg = load_config(write(temp_dir, ""))
        assert cfg.mode is RunMode.BOTH
        assert cfg.solver is SolverChoice.BOTH
        assert cfg.physics.kappa == 0.5
        assert cfg.numerics.n_max == 64
        assert cfg.numerics.dt == pytest.approx(1.0 / 4096)

    def test_comments_and_whitespace(self, temp_dir):
        cfg = load_config(write(temp_dir, "# header\n\n  schedule.epsilon = 0.02  \nmode=standard\n"))
        assert cfg.schedule.epsilon == 0.02
        assert cfg.modes == (Clock.STANDARD,)

    def test_enum_values(self, temp_dir):
        cfg = load_config(write(temp_dir, "numerics.decay_model=integrated\n"))
        assert cfg.numerics.decay_model is DecayModel.INTEGRATED

    def test_alpha_bar_below_one(self, temp_dir):
        with pytest.raises(ConfigError, match="alpha_bar ≥ 1") as exc:
            load_config(write(temp_dir, "schedule.L0=10\nschedule.alpha_bar=0.5\n"))
        assert exc.value.context["key"] == "schedule.alpha_bar"
        assert exc.value.context["line"] == 2

    def test_unknown_key(self, temp_dir):
        with pytest.raises(ConfigError, match="unknown key") as exc:
            load_config(write(temp_dir, "schedule.epsilonn=0.04\n"))
        assert exc.value.context["line"] == 1

    def test_duplicate_key(self, temp_dir):
        with pytest.raises(ConfigError, match="duplicate"):
            load_config(write(temp_dir, "schedule.L0=10\nschedule.L0=11\n"))

    def test_missing_equals(self, temp_dir):
        with pytest.raises(ConfigError) as exc:
            load_config(write(temp_dir, "schedule.L0=10\nschedule.L0\n"))
        assert exc.value.context["line"] == 2

    def test_non_numeric_value(self, temp_dir):
        with pytest.raises(ConfigError, match="schedule.epsilon"):
            load_config(write(temp_dir, "schedule.epsilon=fast\n"))

    def test_cross_block_invariant(self, temp_dir):
        with pytest.raises(ConfigError, match="profile.x0"):
            load_config(write(temp_dir, "schedule.L0=4\nprofile.x0=5\n"))

    def test_missing_file(self, temp_dir):
        with pytest.raises(ConfigError, match="not found"):
            load_config(os.path.join(temp_dir, "missing.cfg"))

    def test_non_utf8(self, temp_dir):
        path = os.path.join(temp_dir, "latin.cfg")
        with open(path, 'wb') as f:
            f.write(b"schedule.L0=\xff\n")
        with pytest.raises(ConfigError, match="UTF-8"):
            load_config(path)

    def test_known_keys(self):
        keys = known_keys()
        assert "physics.kappa" in keys
        assert "numerics.basis_normalization" in keys
        assert "mode" in keys and "solver" in keys


class TestPresets:
    """Test the figure presets."""

    def test_fig1_parameters(self):
        cfg = load_preset("fig1")
        assert cfg.physics.kappa == 0.5
        assert cfg.schedule.L0 == 10.0
        assert cfg.schedule.epsilon == 0.04
        assert cfg.schedule.alpha_bar == 100.0

    def test_fig3_output_grid(self):
        cfg = load_preset("fig3")
        assert cfg.output.flux_times == 201
        assert cfg.output.x_resolution == 401

    def test_unknown_preset(self):
        with pytest.raises(ConfigError, match="unknown preset"):
            load_preset("fig4")

    def test_assumed_keys(self):
        loader = RunConfigLoader.from_preset("fig2")
        assert loader.assumed_keys() == {"schedule.T_standard", "profile.x0", "profile.sigma"}
        assert "schedule.epsilon" in loader.explicit_keys

    def test_files_have_no_assumptions(self, sample_config_file):
        assert RunConfigLoader.from_path(sample_config_file).assumed_keys() == set()


class TestOverrides:
    """Test command-line mode/solver overrides."""

    def test_override(self):
        cfg = apply_overrides(load_preset("fig1"), mode="fast_forward", solver="series")
        assert cfg.modes == (Clock.FAST_FORWARD,)
        assert cfg.solvers == ("series",)

    def test_no_override(self):
        cfg = load_preset("fig1")
        assert apply_overrides(cfg) == cfg

    def test_invalid_override(self):
        with pytest.raises(ConfigError) as exc:
            apply_overrides(load_preset("fig1"), mode="sideways")
        assert exc.value.context["key"] == "mode"

    def test_override_message_has_no_pydantic_prefix(self):
        cfg = RunConfig.model_construct(profile=ProfileBlock(x0=20.0))
        with pytest.raises(ConfigError) as exc:
            apply_overrides(cfg, mode="standard")
        assert exc.value.message.startswith("config: profile.x0 must lie in (0, L0=10.0)")
        assert "Value error" not in str(exc.value)
        assert exc.value.context == {"key": "config"}

