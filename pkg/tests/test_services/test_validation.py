"""Tests for config validation reports."""

import os
from pathlib import Path

import pytest

from src.services.validation import validate_config

pytestmark = pytest.mark.unit


class TestConfigValidation:
    """Test config validation functionality."""

    def test_validate_valid_config(self, sample_config_file):
        """Test validation of a valid config file."""
        result = validate_config(sample_config_file)

        assert result['success'] is True
        assert result['error'] is None
        assert result['stage'] == 'complete'
        assert result['details']['resolved']['numerics.M'] == '64'
        assert 'schedule.epsilon' in result['details']['explicit_keys']

    def test_validate_nonexistent_file(self):
        """Test validation of non-existent file."""
        result = validate_config('nonexistent_config.cfg')

        assert result['success'] is False
        assert result['stage'] == 'initial'
        assert 'not found' in result['error'].lower()

    def test_validate_empty_file(self, temp_dir):
        """An empty file resolves to the documented defaults."""
        path = os.path.join(temp_dir, "empty.cfg")
        open(path, 'w').close()

        result = validate_config(path)

        assert result['success'] is True
        assert result['details']['resolved']['mode'] == 'both'
        assert result['details']['T_FF'] == pytest.approx(1.0)

    def test_validate_parse_error(self, temp_dir):
        """Test that parse errors report the line number."""
        path = os.path.join(temp_dir, "bad.cfg")
        with open(path, 'w') as f:
            f.write("schedule.L0=10\nthis line is broken\n")

        result = validate_config(path)

        assert result['success'] is False
        assert result['stage'] == 'parsing'
        assert result['details']['line'] == 2

    def test_validate_constraint_error(self, temp_dir):
        """Test that invariant violations name the key."""
        path = os.path.join(temp_dir, "bad.cfg")
        with open(path, 'w') as f:
            f.write("schedule.alpha_bar=0.5\n")

        result = validate_config(path)

        assert result['success'] is False
        assert result['stage'] == 'validation'
        assert 'alpha_bar ≥ 1' in result['error']
        assert result['details']['key'] == 'schedule.alpha_bar'


class TestLayering:
    """The numerical core stays independent of the service layer."""

    def test_core_never_imports_services(self):
        core_dir = Path(__file__).resolve().parents[2] / "src" / "core"
        offenders = [path.name for path in sorted(core_dir.glob("*.py"))
                     if "src.services" in path.read_text(encoding="utf-8")
                     or "from ..services" in path.read_text(encoding="utf-8")]
        assert offenders == []
