"""Test configuration and fixtures."""

import os
import tempfile
import shutil

import pytest

from src.core.models import GaussianProfile, ModalDecomposition, ScheduleConfig
from src.core.spectral import project_profile


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test files."""
    temp_dir = tempfile.mkdtemp()
    yield temp_dir
    shutil.rmtree(temp_dir)


@pytest.fixture
def figure_schedule():
    """Schedule at the figure parameters (L0=10, eps=0.04, alpha_bar=100, T=100)."""
    return ScheduleConfig(L0=10.0, epsilon=0.04, alpha_bar=100.0, T_standard=100.0)


@pytest.fixture
def gaussian_profile():
    """Unit-width Gaussian centred in the initial box."""
    return GaussianProfile(x0=5.0, sigma=1.0, domain_length=10.0)


@pytest.fixture
def figure_modes(gaussian_profile):
    """Gaussian projected onto 64 sine modes of [0, 10] with kappa=0.5."""
    return project_profile(gaussian_profile, 10.0, 64, 1024, kappa=0.5)


@pytest.fixture
def single_mode():
    """u(x, 0) = sin(pi x / 10)."""
    return ModalDecomposition.from_coefficients([1.0], L_ref=10.0, kappa=0.5)


@pytest.fixture
def sample_config_content():
    """Small but complete config exercising every block."""
    return (
        "# quick run\n"
        "schedule.L0=10\n"
        "schedule.epsilon=0.04\n"
        "schedule.alpha_bar=100\n"
        "schedule.T_standard=100\n"
        "physics.kappa=0.5\n"
        "profile.sigma=1\n"
        "\n"
        "numerics.n_max=64\n"
        "numerics.quad_points=1024\n"
        "numerics.M=64\n"
        "numerics.dt=0.00390625\n"
        "output.sample_times=0,0.5,1\n"
        "output.x_resolution=51\n"
        "output.flux_times=11\n"
    )


@pytest.fixture
def sample_config_file(temp_dir, sample_config_content):
    """Write the sample config to a temporary file."""
    path = os.path.join(temp_dir, "run.cfg")
    with open(path, 'w', encoding='utf-8') as f:
        f.write(sample_config_content)
    return path
