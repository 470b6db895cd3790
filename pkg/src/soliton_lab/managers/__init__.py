"""
Managers for soliton-lab file artifacts.
"""

from soliton_lab.managers.artifact_store import ArtifactStore, read_state_csv

__all__ = [
    "ArtifactStore",
    "read_state_csv",
]
