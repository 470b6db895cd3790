"""
Shared fixtures for integration tests.

This conftest provides:
- The reference model parameters and the default grid
- Session-scoped relaxed sectors, so each sector is relaxed once per test run
"""

import pytest

from soliton_lab.jobs.experiments import relax_sector
from soliton_lab.models import ModelParams, RelaxConfig, SectorLabel
from soliton_lab.physics.lattice import FieldState, Grid


@pytest.fixture(scope="session")
def params() -> ModelParams:
    return ModelParams(phi0=1.0, psi0=2.0)


@pytest.fixture(scope="session")
def grid() -> Grid:
    return Grid.default()


@pytest.fixture(scope="session")
def relaxed(params, grid):
    """
    Lazily relaxed sectors keyed by name: ``relaxed("D_AB") -> (state, mass)``.

    Results are cached for the whole session.
    """
    cache: dict[str, tuple[FieldState, float]] = {}

    def get(name: str) -> tuple[FieldState, float]:
        if name not in cache:
            cache[name] = relax_sector(SectorLabel.parse(name), grid, RelaxConfig(), params)
        return cache[name]

    return get
