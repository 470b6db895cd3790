"""
Scripted experiments: soliton census, stimulated decay and soliton tracking.
"""

from soliton_lab.jobs.experiments.soliton_census import (
    CENSUS_SECTORS,
    binding_energy,
    census,
    census_row,
    classify_stability,
)
from soliton_lab.jobs.experiments.decay import (
    DEFAULT_SCAN_FACTORS,
    clean_run_duration,
    decay_experiment,
    decay_scan,
    expected_products,
    pump_phi,
    relax_sector,
    run_decay,
    scan_decays,
    simulate_decay,
)
from soliton_lab.physics.tracking import TrackedSoliton, track_solitons

__all__ = [
    "CENSUS_SECTORS",
    "DEFAULT_SCAN_FACTORS",
    "TrackedSoliton",
    "binding_energy",
    "census",
    "census_row",
    "classify_stability",
    "clean_run_duration",
    "decay_experiment",
    "decay_scan",
    "expected_products",
    "pump_phi",
    "relax_sector",
    "run_decay",
    "scan_decays",
    "simulate_decay",
    "track_solitons",
]
