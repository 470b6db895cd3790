"""
Step-wise variational relaxation of static field configurations.
"""

from soliton_lab.jobs.relaxer.relax import RelaxResult, relax, sweep

__all__ = [
    "RelaxResult",
    "relax",
    "sweep",
]
