"""Shared fixtures for managers tests."""

import pytest

from soliton_lab.managers import ArtifactStore


@pytest.fixture
def store(tmp_path):
    """ArtifactStore writing into a temporary directory, with provenance fields set."""
    return ArtifactStore(tmp_path / "out", config_path="runs/test.cfg", config_hash="abc123")
