"""
Leapfrog time evolution of the coupled field equations.
"""

from soliton_lab.jobs.evolver.leapfrog import RunReport, acceleration, evolve, step

__all__ = [
    "RunReport",
    "acceleration",
    "evolve",
    "step",
]
