"""
Command-line entry point for soliton-lab.

Commands:
- relax: relax one sector from its analytic ansatz
- evolve: evolve a state CSV in time
- decay: pump a V-type soliton over a range of factors and report the products
- census: regenerate the mass / charge / stability table
- orbit: relax a sector and export its field-space orbit
- potential: export the potential height map and the vacuum table

Exit codes: 0 success, 2 configuration or input error, 3 numerical failure,
4 classification failure.
"""

from collections.abc import Callable
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
import typer
from loguru import logger

from soliton_lab.config import RunConfig, config_hash, get_settings, load_run_config
from soliton_lab.errors import (
    ClassificationFailure,
    ConfigError,
    InvalidInputError,
    NumericalFailure,
)
from soliton_lab.jobs.evolver import evolve
from soliton_lab.jobs.experiments import binding_energy, census, scan_decays
from soliton_lab.jobs.relaxer import relax
from soliton_lab.managers import ArtifactStore, read_state_csv
from soliton_lab.models import SectorLabel
from soliton_lab.physics.charges import adjacent_sectors, charge_H, charge_V, classify_sector
from soliton_lab.physics.lattice import discrete_energy
from soliton_lab.physics.model import potential, vacua
from soliton_lab.physics.seeds import orbit_residuals, seed_for_sector

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_CLASSIFICATION = 4

POTENTIAL_SAMPLES = 201

app = typer.Typer(
    name="soliton-lab",
    help="Relaxation, dynamics and decay of H/V/D solitons in a coupled two-field model",
)


def exit_code_for(error: Exception) -> int:
    if isinstance(error, ConfigError | InvalidInputError):
        return EXIT_CONFIG
    if isinstance(error, NumericalFailure):
        return EXIT_NUMERICAL
    if isinstance(error, ClassificationFailure):
        return EXIT_CLASSIFICATION
    raise error


def parse_sector(name: str) -> SectorLabel:
    try:
        return SectorLabel.parse(name)
    except ValueError as e:
        valid = ", ".join(s.name for s in adjacent_sectors())
        raise InvalidInputError(f"invalid sector {name!r}; valid sectors: {valid}") from e


def _store(cfg: RunConfig, config: Path | None) -> ArtifactStore:
    return ArtifactStore(cfg.output_dir, config_path=config, config_hash=config_hash(cfg))


def _load(config: Path | None, out: Path | None, **overrides: object) -> RunConfig:
    """RunConfig from file and options; output_dir and max_workers fall back to Settings."""
    cfg = load_run_config(config, output_dir=str(out) if out else None, **overrides)
    settings = get_settings()
    fallback: dict[str, object] = {}
    if "output_dir" not in cfg.model_fields_set:
        fallback["output_dir"] = settings.output_dir
    if "max_workers" not in cfg.model_fields_set:
        fallback["max_workers"] = settings.max_workers
    return cfg.model_copy(update=fallback) if fallback else cfg


def _execute(command: Callable[[], int]) -> None:
    try:
        code = command()
    except Exception as e:
        code = exit_code_for(e)
        logger.error(f"{type(e).__name__}: {e}")
        typer.echo(f"Error: {e}", err=True)
    raise typer.Exit(code=code)


# ---------------------------------------------------------------------------
# Command bodies
# ---------------------------------------------------------------------------


def cmd_relax(cfg: RunConfig, sector: str, config: Path | None = None) -> int:
    """Relax ``sector``; writes the relaxed state, its energy trace and a JSON summary."""
    label = parse_sector(sector)
    p, grid = cfg.model_params, cfg.grid
    result = relax(seed_for_sector(label, grid, p), cfg.relax_config, p)
    store = _store(cfg, config)
    store.write_state_csv(result.state, f"relaxed_{label.name}.csv", p)
    store.write_trace(result.trace, f"energy_trace_{label.name}.csv")

    found = classify_sector(result.state, p, cfg.charge_tolerance)
    summary = {
        "sector": found.name,
        "mass": result.energy,
        "discrete_energy": discrete_energy(result.state, p),
        "QH": charge_H(result.state, p, cfg.charge_tolerance),
        "QV": charge_V(result.state, p, cfg.charge_tolerance),
        "converged": result.converged,
        "sweeps": result.sweeps,
        "stop_reason": result.reason,
    }
    path = store.write_json(summary, f"relax_{label.name}.json")
    logger.info(f"{label.name}: mass {result.energy:.6g}, summary in {path}")
    return EXIT_OK if result.converged else EXIT_NUMERICAL


def cmd_evolve(cfg: RunConfig, input_path: Path, config: Path | None = None) -> int:
    """Evolve a state CSV; writes the snapshot series, diagnostics and a JSON summary."""
    if not input_path.is_file():
        raise InvalidInputError(f"input state not found: {input_path}")
    p = cfg.model_params
    state = read_state_csv(input_path)
    report = evolve(state, cfg.evolve_config, p)
    store = _store(cfg, config)
    store.write_snapshots(report, p=p)
    store.write_diagnostics(report)
    final = report.diagnostics.iloc[-1]
    summary = {
        "input": str(input_path),
        "steps": report.steps,
        "dt": report.dt,
        "t_end": report.times[-1],
        "energy_drift": report.energy_drift,
        "QH": float(final["QH"]),
        "QV": float(final["QV"]),
        "snapshots": len(report.snapshots),
    }
    store.write_json(summary, "evolve_summary.json")
    return EXIT_OK


def cmd_decay(cfg: RunConfig, parent: str, config: Path | None = None) -> int:
    """Pump-factor scan of a V-type parent; one report and snapshot series per factor.

    Factors whose final state cannot be tracked are written, then flagged by exit 4.
    """
    label = parse_sector(parent)
    if label.family != "V":
        raise InvalidInputError(f"decay needs a V-type parent (V_DB, V_EC, ...), got {label.name}")
    p = cfg.model_params
    results = scan_decays(
        label,
        cfg.decay_factors,
        cfg.decay_evolve_config,
        p,
        cfg.grid,
        cfg.relax_config,
        cfg.separation_threshold,
        cfg.max_workers,
        get_settings().show_progress,
    )
    store = _store(cfg, config)
    for decay_report, run in results:
        tag = f"decay_{label.name}/factor_{decay_report.pumped_factor:.3f}"
        store.write_json(decay_report, f"{tag}/report.json")
        store.write_snapshots(run, prefix=f"{tag}/snapshot", index_name=f"{tag}/index.csv", p=p)

    decayed = [r for r, _ in results if r.decayed]
    untracked = [r for r, _ in results if r.tracking_failed]
    summary = {
        "parent": label.name,
        "factors": [r.pumped_factor for r, _ in results],
        "decayed_factors": [r.pumped_factor for r in decayed],
        "untracked_factors": [r.pumped_factor for r in untracked],
        "first_decay_factor": decayed[0].pumped_factor if decayed else None,
        "chiralities": sorted({"+".join(r.chirality or ()) for r in decayed}),
    }
    store.write_json(summary, f"decay_{label.name}.json")
    if untracked:
        logger.error(f"{label.name}: {len(untracked)} factor(s) ended in an untrackable state")
        return EXIT_CLASSIFICATION
    return EXIT_OK


def cmd_census(cfg: RunConfig, config: Path | None = None) -> int:
    """Regenerate the census table; non-converged rows are written, then flagged by exit 3."""
    p = cfg.model_params
    rows = census(
        p,
        cfg.grid,
        cfg.relax_config,
        cfg.evolve_config,
        max_workers=cfg.max_workers,
        show_progress=get_settings().show_progress,
    )
    store = _store(cfg, config)
    store.write_census(rows)
    binding = {}
    for parent in ("V_EC", "V_DB"):
        try:
            binding[parent] = binding_energy(rows, parent)
        except InvalidInputError as e:
            logger.warning(f"binding energy of {parent} unavailable: {e}")
    summary = {
        "phi0": p.phi0,
        "psi0": p.psi0,
        "rows": [row.model_dump(mode="json") for row in rows],
        "binding_energy": binding,
    }
    store.write_json(summary, "census.json")
    return EXIT_OK if all(row.converged for row in rows) else EXIT_NUMERICAL


def cmd_orbit(cfg: RunConfig, sector: str, config: Path | None = None) -> int:
    """Relax ``sector`` and export its (phi, psi) orbit; the orbit law applies to D only."""
    label = parse_sector(sector)
    p = cfg.model_params
    result = relax(seed_for_sector(label, cfg.grid, p), cfg.relax_config, p)
    store = _store(cfg, config)
    is_diagonal = label.family == "D"
    store.write_orbit(result.state, f"orbit_{label.name}.csv", p, with_residual=is_diagonal)
    summary: dict[str, object] = {"sector": label.name, "converged": result.converged}
    if is_diagonal:
        residuals = orbit_residuals(result.state.phi, result.state.psi, p, min_abs=0.05)
        summary["max_abs_residual"] = float(np.nanmax(np.abs(residuals)))
    else:
        summary["note"] = "orbit_residual omitted: the closed-form orbit law is D-specific"
    store.write_json(summary, f"orbit_{label.name}.json")
    return EXIT_OK if result.converged else EXIT_NUMERICAL


def cmd_potential(
    cfg: RunConfig, config: Path | None = None, samples: int = POTENTIAL_SAMPLES
) -> int:
    """Potential height map over [-2phi0, 2phi0] x [-2psi0, 2psi0] and the vacuum table."""
    p = cfg.model_params
    phi, psi = np.meshgrid(
        np.linspace(-2 * p.phi0, 2 * p.phi0, samples),
        np.linspace(-2 * p.psi0, 2 * p.psi0, samples),
        indexing="ij",
    )
    store = _store(cfg, config)
    height = pd.DataFrame(
        {"phi": phi.ravel(), "psi": psi.ravel(), "V": potential(phi, psi, p).ravel()}
    )
    store.write_frame(height, "potential.csv")
    table = pd.DataFrame([v.model_dump() for v in vacua(p)], columns=["label", "phi", "psi"])
    store.write_frame(table, "vacua.csv")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Typer commands
# ---------------------------------------------------------------------------

ConfigOption = typer.Option(None, "--config", "-c", help="key=value run configuration file")
OutOption = typer.Option(None, "--out", "-o", help="Output directory (overrides output_dir)")


@app.command("relax")
def relax_command(
    sector: str = typer.Option(..., "--sector", "-s", help="Sector name, e.g. H_BC or D_AB"),
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    eps: Optional[float] = typer.Option(None, help="Grid spacing"),
    max_sweeps: Optional[int] = typer.Option(None, help="Sweep budget"),
    rng_seed: Optional[int] = typer.Option(None, help="Random seed"),
) -> None:
    """Relax one sector from its analytic ansatz."""
    _execute(
        lambda: cmd_relax(
            _load(config, out, eps=eps, max_sweeps=max_sweeps, rng_seed=rng_seed), sector, config
        )
    )


@app.command("evolve")
def evolve_command(
    input_path: Path = typer.Option(..., "--input", "-i", help="State CSV to evolve"),
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    t_end: Optional[float] = typer.Option(None, help="Final time"),
    dt: Optional[float] = typer.Option(None, help="Time step (default 0.4*eps)"),
) -> None:
    """Evolve a state CSV with the leapfrog scheme."""
    _execute(lambda: cmd_evolve(_load(config, out, t_end=t_end, dt=dt), input_path, config))


@app.command("decay")
def decay_command(
    parent: str = typer.Option("V_DB", "--sector", "-s", help="V-type parent sector"),
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    factor_min: Optional[float] = typer.Option(None, help="First pump factor"),
    factor_max: Optional[float] = typer.Option(None, help="Last pump factor"),
    factor_step: Optional[float] = typer.Option(None, help="Pump factor increment"),
    t_end: Optional[float] = typer.Option(None, help="Duration of each decay run"),
) -> None:
    """Stimulated decay scan of a V-type soliton."""
    _execute(
        lambda: cmd_decay(
            _load(
                config,
                out,
                decay_factor_min=factor_min,
                decay_factor_max=factor_max,
                decay_factor_step=factor_step,
                decay_t_end=t_end,
            ),
            parent,
            config,
        )
    )


@app.command("census")
def census_command(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    phi0: Optional[float] = typer.Option(None, help="phi vacuum value"),
    psi0: Optional[float] = typer.Option(None, help="psi vacuum value"),
    max_workers: Optional[int] = typer.Option(None, help="Parallel census rows"),
) -> None:
    """Regenerate the soliton census."""
    _execute(
        lambda: cmd_census(
            _load(config, out, phi0=phi0, psi0=psi0, max_workers=max_workers), config
        )
    )


@app.command("orbit")
def orbit_command(
    sector: str = typer.Option(..., "--sector", "-s", help="Sector name, e.g. D_AC"),
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
) -> None:
    """Relax a sector and export its field-space orbit."""
    _execute(lambda: cmd_orbit(_load(config, out), sector, config))


@app.command("potential")
def potential_command(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    samples: int = typer.Option(POTENTIAL_SAMPLES, help="Samples per axis"),
) -> None:
    """Export the potential height map and the vacuum table."""
    _execute(lambda: cmd_potential(_load(config, out), config, samples))


if __name__ == "__main__":
    app()
