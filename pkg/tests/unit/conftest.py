"""Shared fixtures for unit tests."""

import pytest

from soliton_lab.models import ModelParams, RelaxConfig
from soliton_lab.physics.lattice import Grid


@pytest.fixture
def params():
    """Reference constants (phi0, psi0) = (1, 2)."""
    return ModelParams(phi0=1.0, psi0=2.0)


@pytest.fixture
def dual_params():
    """phi0 == psi0 == 1, where the first-order reduction applies."""
    return ModelParams(phi0=1.0, psi0=1.0)


@pytest.fixture
def default_grid():
    """[-20, 20] with eps = 0.05."""
    return Grid.default()


@pytest.fixture
def small_grid():
    """[-10, 10] with eps = 0.05."""
    return Grid.from_spacing(-10.0, 10.0, 0.05)


@pytest.fixture
def fine_grid():
    """[-10, 10] with eps = 0.01, for accuracy checks against closed forms."""
    return Grid.from_spacing(-10.0, 10.0, 0.01)


@pytest.fixture
def coarse_grid():
    """[-8, 8] with eps = 0.1; cheap enough for repeated relaxations."""
    return Grid.from_spacing(-8.0, 8.0, 0.1)


@pytest.fixture
def fast_relax_config():
    """Short relaxation used where only qualitative behaviour matters."""
    return RelaxConfig(max_sweeps=1500, window=50, tol=1e-9, log_every=500)
