"""
Soliton census: relaxed mass, charges and stability of every census sector.
"""

from functools import partial

import numpy as np
from loguru import logger

from soliton_lab.errors import InvalidInputError
from soliton_lab.jobs.evolver import evolve
from soliton_lab.jobs.experiments.decay import expected_products
from soliton_lab.jobs.relaxer import relax
from soliton_lab.models import (
    VACUUM_LABELS,
    CensusRow,
    EvolveConfig,
    ModelParams,
    RelaxConfig,
    SectorLabel,
    family_between,
)
from soliton_lab.physics.charges import charge_H, charge_V
from soliton_lab.physics.lattice import Grid
from soliton_lab.physics.model import DEFAULT_PARAMS
from soliton_lab.physics.seeds import seed_for_sector
from soliton_lab.utils.batch import run_jobs

CENSUS_SECTORS = ("D_AB", "D_AC", "D_DA", "D_EA", "H_BC", "V_EC", "H_DE", "V_DB")


def _center_drift(positions: list[list[float] | None]) -> float | None:
    track = [pos[0] for pos in positions if pos is not None and len(pos) == 1]
    if len(track) < 2:
        return None
    return float(np.max(np.abs(np.asarray(track) - track[0])))


def census_row(
    sector: SectorLabel,
    grid: Grid,
    relax_cfg: RelaxConfig = RelaxConfig(),
    evolve_cfg: EvolveConfig | None = EvolveConfig(),
    p: ModelParams = DEFAULT_PARAMS,
) -> CensusRow:
    """Relax one sector and, unless ``evolve_cfg`` is None, run its stability evolution.

    The row is provisionally stable; ``classify_stability`` settles it once every mass is known.
    """
    result = relax(seed_for_sector(sector, grid, p), relax_cfg, p)
    relaxed = result.state
    row = CensusRow(
        sector=sector,
        mass=result.energy,
        QH=charge_H(relaxed, p),
        QV=charge_V(relaxed, p),
        converged=result.converged,
    )
    if evolve_cfg is not None:
        report = evolve(relaxed, evolve_cfg, p)
        row = row.model_copy(
            update={
                "energy_drift": report.energy_drift,
                "center_drift": _center_drift(report.diagnostics["positions"].tolist()),
            }
        )
    logger.info(
        f"{sector.name}: M={row.mass:.4f} Q=({row.QH:+g}, {row.QV:+g})"
        + ("" if row.converged else " [not converged]")
    )
    return row


def _lookup_mass(masses: dict[str, float], sector: SectorLabel) -> float | None:
    # Parity x -> -x maps a sector onto its reverse with the same mass
    return masses.get(sector.name, masses.get(sector.reversed().name))


def best_split(
    sector: SectorLabel, masses: dict[str, float]
) -> tuple[tuple[SectorLabel, SectorLabel], float] | None:
    """Cheapest two-soliton split u -> w -> v of ``sector`` with known product masses."""
    best = None
    for via in VACUUM_LABELS:
        if via in (sector.from_vacuum, sector.to_vacuum):
            continue
        if family_between(sector.from_vacuum, via) is None:
            continue
        if family_between(via, sector.to_vacuum) is None:
            continue
        first = SectorLabel.between(sector.from_vacuum, via)
        second = SectorLabel.between(via, sector.to_vacuum)
        m1, m2 = _lookup_mass(masses, first), _lookup_mass(masses, second)
        if m1 is None or m2 is None:
            continue
        if best is None or m1 + m2 < best[1]:
            best = ((first, second), m1 + m2)
    return best


def classify_stability(rows: list[CensusRow]) -> list[CensusRow]:
    """Mark a row metastable when an allowed split into two lighter solitons exists."""
    masses = {row.sector.name: row.mass for row in rows}
    classified = []
    for row in rows:
        split = best_split(row.sector, masses)
        if split is not None and split[1] < row.mass:
            row = row.model_copy(update={"stability": "metastable", "decay_mode": split[0]})
        else:
            row = row.model_copy(update={"stability": "stable", "decay_mode": None})
        classified.append(row)
    return classified


def census(
    p: ModelParams = DEFAULT_PARAMS,
    grid: Grid | None = None,
    relax_cfg: RelaxConfig = RelaxConfig(),
    evolve_cfg: EvolveConfig | None = EvolveConfig(),
    sectors: tuple[str, ...] = CENSUS_SECTORS,
    max_workers: int = 1,
    show_progress: bool = False,
) -> list[CensusRow]:
    """Relax, measure and classify every sector; rows come back in ``sectors`` order."""
    grid = grid or Grid.default()
    labels = [SectorLabel.parse(name) for name in sectors]
    job = partial(census_row, grid=grid, relax_cfg=relax_cfg, evolve_cfg=evolve_cfg, p=p)
    outcomes, _ = run_jobs(
        labels, job, max_workers=max_workers, desc="census", show_progress=show_progress
    )
    rows = classify_stability(
        [outcome.result for outcome in outcomes if outcome.result is not None]
    )
    unconverged = [row.sector.name for row in rows if not row.converged]
    if unconverged:
        logger.warning(f"census rows without converged relaxation: {unconverged}")
    return rows


def binding_energy(rows: list[CensusRow], parent: SectorLabel | str = "V_EC") -> float:
    """M(parent) minus the masses of its two D-type products through the central vacuum.

    Product masses missing from ``rows`` are taken from their parity mirrors.
    """
    if isinstance(parent, str):
        parent = SectorLabel.parse(parent)
    if parent.family == "D":
        raise InvalidInputError(f"{parent.name} already ends on the central vacuum")
    masses = {row.sector.name: row.mass for row in rows}
    parent_mass = masses.get(parent.name)
    if parent_mass is None:
        raise InvalidInputError(f"{parent.name} is not in the census")
    total = 0.0
    for product in expected_products(parent):
        mass = _lookup_mass(masses, product)
        if mass is None:
            raise InvalidInputError(f"no census mass for {product.name} or its mirror")
        total += mass
    return parent_mass - total
