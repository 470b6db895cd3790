"""
Stimulated decay of V-type solitons.

The parent is relaxed, its phi amplitude is pumped, and the pumped state is evolved. The
outcome is read off with the soliton tracker: a decay is two D-type products flying apart.
"""

import math
from functools import partial

import numpy as np
from loguru import logger

from soliton_lab.errors import ClassificationFailure, InvalidInputError, InvalidPumpError
from soliton_lab.jobs.evolver import RunReport, evolve
from soliton_lab.jobs.relaxer import relax
from soliton_lab.models import (
    DecayProduct,
    DecayReport,
    EnergyBudget,
    EvolveConfig,
    ModelParams,
    RelaxConfig,
    SectorLabel,
)
from soliton_lab.physics.lattice import FieldState, Grid, total_energy
from soliton_lab.physics.model import DEFAULT_PARAMS, nearest_vacuum
from soliton_lab.physics.seeds import seed_for_sector
from soliton_lab.physics.tracking import TrackedSoliton, track_solitons
from soliton_lab.utils.batch import run_jobs

DEFAULT_SEPARATION_THRESHOLD = 5.0
DEFAULT_SCAN_FACTORS = tuple(round(1.1 + 0.1 * k, 10) for k in range(10))

# Velocities are fitted over the last quarter of the run
VELOCITY_FIT_FRACTION = 0.25


def pump_phi(s: FieldState, factor: float, p: ModelParams = DEFAULT_PARAMS) -> FieldState:
    """Scale the deviation of phi from the straight line joining its boundary values.

    psi and the boundary values are untouched, so the sector is preserved.

    Raises:
        InvalidPumpError: ``factor`` is not positive or the boundary left the vacuum.
        InvalidInputError: ``s`` is not static.
    """
    if factor <= 0:
        raise InvalidPumpError(f"pump factor must be positive, got {factor}")
    if not s.is_static:
        raise InvalidInputError("pump_phi() expects a static state")

    background = np.linspace(s.phi[0], s.phi[-1], s.grid.n)
    phi = background + factor * (s.phi - background)
    for idx in (0, -1):
        _, distance = nearest_vacuum(float(phi[idx]), float(s.psi[idx]), p)
        if distance > 1e-9:
            raise InvalidPumpError(f"pumped boundary value at index {idx} is off vacuum")
    return FieldState.static(s.grid, phi, s.psi.copy())


def clean_run_duration(grid: Grid, region_halfwidth: float) -> float:
    """Time before radiation leaving |x| <= region_halfwidth reflects off a pinned end and
    re-enters the region (signals travel at speed <= 1)."""
    distance = min(grid.x_max, -grid.x_min) - region_halfwidth
    if distance <= 0:
        return 0.0
    return 2.0 * distance


def expected_products(parent: SectorLabel) -> tuple[SectorLabel, SectorLabel]:
    """The two D-type solitons a corner-to-corner parent splits into via the central vacuum."""
    return (
        SectorLabel.between(parent.from_vacuum, "A"),
        SectorLabel.between("A", parent.to_vacuum),
    )


def relax_sector(
    sector: SectorLabel,
    grid: Grid,
    relax_cfg: RelaxConfig = RelaxConfig(),
    p: ModelParams = DEFAULT_PARAMS,
) -> tuple[FieldState, float]:
    """Relaxed state of a sector from its closed-form ansatz, with its mass."""
    result = relax(seed_for_sector(sector, grid, p), relax_cfg, p)
    if not result.converged:
        logger.warning(f"{sector.name}: relaxation did not converge after {result.sweeps} sweeps")
    return result.state, result.energy


def _fit_velocities(report: RunReport, final: list[TrackedSoliton]) -> list[float]:
    names = [sol.sector.name for sol in final]
    t_start = report.times[-1] * (1.0 - VELOCITY_FIT_FRACTION)
    times, positions = [], []
    for t, (_, row) in zip(report.times, report.diagnostics.iterrows(), strict=True):
        if t >= t_start and row["sectors"] == names:
            times.append(t)
            positions.append(row["positions"])
    if len(times) < 2:
        return [0.0] * len(final)
    track = np.asarray(positions)
    return [float(np.polyfit(times, track[:, k], 1)[0]) for k in range(len(final))]


def _energy_budget(
    parent_mass: float,
    pumped: FieldState,
    final: FieldState,
    products: list[DecayProduct],
    product_masses: dict[str, float],
    p: ModelParams,
) -> EnergyBudget:
    initial_energy = total_energy(pumped, p)
    final_energy = total_energy(final, p)
    rest = sum(product_masses[prod.sector.name] for prod in products)
    kinetic = 0.0
    for prod in products:
        v = min(abs(prod.velocity), 0.999)
        kinetic += (1.0 / math.sqrt(1.0 - v * v) - 1.0) * product_masses[prod.sector.name]
    return EnergyBudget(
        parent_rest_energy=parent_mass,
        pump_energy=initial_energy - parent_mass,
        product_rest_energy=rest,
        product_kinetic_energy=kinetic,
        radiation_remainder=final_energy - rest - kinetic,
        initial_energy=initial_energy,
        final_energy=final_energy,
    )


def simulate_decay(
    relaxed: FieldState,
    parent: SectorLabel,
    parent_mass: float,
    factor: float,
    cfg: EvolveConfig = EvolveConfig(),
    p: ModelParams = DEFAULT_PARAMS,
    product_masses: dict[str, float] | None = None,
    separation_threshold: float = DEFAULT_SEPARATION_THRESHOLD,
) -> tuple[DecayReport, RunReport]:
    """Pump an already relaxed parent by ``factor``, evolve it and read off the products.

    Returns the report together with the run it was read from.
    """
    pumped = pump_phi(relaxed, factor, p)
    report = evolve(pumped, cfg, p)
    final = report.final
    t_end = report.times[-1]

    try:
        tracked = track_solitons(final, p)
    except ClassificationFailure as e:
        logger.warning(f"{parent.name} x{factor}: final state could not be tracked ({e})")
        untracked = DecayReport(
            parent=parent,
            pumped_factor=factor,
            decayed=False,
            t_end=t_end,
            tracking_error=str(e),
        )
        return untracked, report

    velocities = _fit_velocities(report, tracked)
    products = [
        DecayProduct(sector=sol.sector, position=sol.position, velocity=v)
        for sol, v in zip(tracked, velocities, strict=True)
    ]
    separation = products[-1].position - products[0].position if len(products) > 1 else None
    decayed = (
        len(products) == 2
        and all(prod.sector.family == "D" for prod in products)
        and separation is not None
        and separation > separation_threshold
    )

    budget = None
    if decayed:
        masses = dict(product_masses or {})
        for prod in products:
            if prod.sector.name not in masses:
                _, masses[prod.sector.name] = relax_sector(prod.sector, relaxed.grid, p=p)
        budget = _energy_budget(parent_mass, pumped, final, products, masses, p)

    region = max((abs(prod.position) for prod in products), default=0.0)
    clean = t_end <= clean_run_duration(final.grid, region)
    if not clean:
        logger.warning(
            f"{parent.name} x{factor}: run outlasts the reflection-free window "
            f"({clean_run_duration(final.grid, region):.1f}); asymptotics may be contaminated"
        )

    outcome = " + ".join(prod.sector.name for prod in products) or "nothing tracked"
    logger.info(f"{parent.name} x{factor}: {'decayed' if decayed else 'intact'} ({outcome})")
    decay_report = DecayReport(
        parent=parent,
        pumped_factor=factor,
        decayed=decayed,
        products=products,
        energy_budget=budget,
        t_end=t_end,
        separation=separation,
        clean_asymptotics=clean,
    )
    return decay_report, report


def run_decay(
    relaxed: FieldState,
    parent: SectorLabel,
    parent_mass: float,
    factor: float,
    cfg: EvolveConfig = EvolveConfig(),
    p: ModelParams = DEFAULT_PARAMS,
    product_masses: dict[str, float] | None = None,
    separation_threshold: float = DEFAULT_SEPARATION_THRESHOLD,
) -> DecayReport:
    """Like ``simulate_decay`` but without the run."""
    decay_report, _ = simulate_decay(
        relaxed, parent, parent_mass, factor, cfg, p, product_masses, separation_threshold
    )
    return decay_report


def _check_parent(parent: SectorLabel | str) -> SectorLabel:
    if isinstance(parent, str):
        parent = SectorLabel.parse(parent)
    if parent.family != "V":
        raise InvalidInputError(f"decay experiments need a V-type parent, got {parent.name}")
    return parent


def decay_experiment(
    parent: SectorLabel | str,
    factor: float,
    cfg: EvolveConfig = EvolveConfig(t_end=30.0),
    p: ModelParams = DEFAULT_PARAMS,
    grid: Grid | None = None,
    relax_cfg: RelaxConfig = RelaxConfig(),
    separation_threshold: float = DEFAULT_SEPARATION_THRESHOLD,
) -> DecayReport:
    """Relax a V-type parent, pump its phi amplitude by ``factor`` and evolve.

    No decay is not an error: the report comes back with ``decayed=False``.
    """
    parent = _check_parent(parent)
    grid = grid or Grid.default()
    relaxed, mass = relax_sector(parent, grid, relax_cfg, p)
    return run_decay(
        relaxed, parent, mass, factor, cfg, p, separation_threshold=separation_threshold
    )


def scan_decays(
    parent: SectorLabel | str,
    factors: tuple[float, ...] = DEFAULT_SCAN_FACTORS,
    cfg: EvolveConfig = EvolveConfig(t_end=30.0),
    p: ModelParams = DEFAULT_PARAMS,
    grid: Grid | None = None,
    relax_cfg: RelaxConfig = RelaxConfig(),
    separation_threshold: float = DEFAULT_SEPARATION_THRESHOLD,
    max_workers: int = 1,
    show_progress: bool = False,
) -> list[tuple[DecayReport, RunReport]]:
    """Pump-factor scan sharing a single relaxed parent; one (report, run) pair per factor."""
    parent = _check_parent(parent)
    grid = grid or Grid.default()
    relaxed, mass = relax_sector(parent, grid, relax_cfg, p)
    product_masses = {
        sector.name: relax_sector(sector, grid, relax_cfg, p)[1]
        for sector in expected_products(parent)
    }

    job = partial(
        simulate_decay,
        relaxed,
        parent,
        mass,
        cfg=cfg,
        p=p,
        product_masses=product_masses,
        separation_threshold=separation_threshold,
    )
    outcomes, _ = run_jobs(
        list(factors),
        job,
        max_workers=max_workers,
        desc=f"decay scan {parent.name}",
        show_progress=show_progress,
    )
    results = [outcome.result for outcome in outcomes if outcome.result is not None]

    chiralities = {r.chirality for r, _ in results if r.decayed}
    if len(chiralities) > 1:
        logger.warning(f"{parent.name}: product ordering varied across factors: {chiralities}")
    return results


def decay_scan(
    parent: SectorLabel | str,
    factors: tuple[float, ...] = DEFAULT_SCAN_FACTORS,
    cfg: EvolveConfig = EvolveConfig(t_end=30.0),
    p: ModelParams = DEFAULT_PARAMS,
    grid: Grid | None = None,
    relax_cfg: RelaxConfig = RelaxConfig(),
    separation_threshold: float = DEFAULT_SEPARATION_THRESHOLD,
    max_workers: int = 1,
    show_progress: bool = False,
) -> list[DecayReport]:
    """One decay report per pump factor, all sharing a single relaxed parent."""
    results = scan_decays(
        parent,
        factors,
        cfg,
        p,
        grid,
        relax_cfg,
        separation_threshold,
        max_workers,
        show_progress,
    )
    return [decay_report for decay_report, _ in results]
