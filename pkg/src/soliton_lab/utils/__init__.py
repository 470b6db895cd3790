"""
Utility functions for soliton-lab.

- batch: independent-job runner used by the census and the pump-factor scans
"""

from soliton_lab.utils.batch import JobOutcome, run_jobs

__all__ = [
    "JobOutcome",
    "run_jobs",
]
