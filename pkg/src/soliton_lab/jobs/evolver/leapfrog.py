"""
Kick-drift-kick leapfrog for

    phi_tt = phi_xx - dV/dphi,    psi_tt = psi_xx - dV/dpsi

with pinned (vacuum-valued) endpoints.
"""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from loguru import logger

from soliton_lab.errors import BlowUpError, ClassificationFailure
from soliton_lab.models import EvolveConfig, ModelParams
from soliton_lab.physics.charges import charge_H, charge_V
from soliton_lab.physics.lattice import FieldState, laplacian_1d, total_energy, total_momentum
from soliton_lab.physics.model import DEFAULT_PARAMS, grad_potential
from soliton_lab.physics.tracking import track_solitons

BLOWUP_FACTOR = 100.0

DIAGNOSTIC_COLUMNS = [
    "step",
    "t",
    "total_energy",
    "total_momentum",
    "QH",
    "QV",
    "positions",
    "sectors",
]


@dataclass
class RunReport:
    """Snapshots of a run and one diagnostics row per snapshot."""

    snapshots: list[FieldState]
    diagnostics: pd.DataFrame
    dt: float
    steps: int
    times: list[float] = field(default_factory=list)

    @property
    def final(self) -> FieldState:
        return self.snapshots[-1]

    @property
    def energy_drift(self) -> float:
        """max |E(t) - E(0)| / E(0) over the snapshots (absolute when E(0) is zero)."""
        energies = self.diagnostics["total_energy"].to_numpy()
        change = float(np.max(np.abs(energies - energies[0])))
        return change / abs(energies[0]) if energies[0] != 0 else change


def acceleration(
    phi: np.ndarray, psi: np.ndarray, eps: float, p: ModelParams = DEFAULT_PARAMS
) -> tuple[np.ndarray, np.ndarray]:
    """Field accelerations laplacian - grad V; zero at the pinned endpoints."""
    dv_dphi, dv_dpsi = grad_potential(phi, psi, p)
    acc_phi = laplacian_1d(phi, eps) - dv_dphi
    acc_psi = laplacian_1d(psi, eps) - dv_dpsi
    for acc in (acc_phi, acc_psi):
        acc[0] = acc[-1] = 0.0
    return acc_phi, acc_psi


def _check_bounded(phi: np.ndarray, psi: np.ndarray, p: ModelParams, step_index: int) -> None:
    limit = BLOWUP_FACTOR * p.field_scale
    if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(psi))):
        raise BlowUpError(step_index, f"non-finite field values at step {step_index}")
    peak = max(float(np.max(np.abs(phi))), float(np.max(np.abs(psi))))
    if peak > limit:
        raise BlowUpError(
            step_index, f"|field|={peak:.3g} exceeds {limit:.3g} at step {step_index}"
        )


def _kdk(
    phi: np.ndarray,
    psi: np.ndarray,
    phi_t: np.ndarray,
    psi_t: np.ndarray,
    acc: tuple[np.ndarray, np.ndarray],
    dt: float,
    eps: float,
    p: ModelParams,
    step_index: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Advance the arrays in place by one step; returns the accelerations at the new time."""
    half = 0.5 * dt
    phi_t += half * acc[0]
    psi_t += half * acc[1]
    phi += dt * phi_t
    psi += dt * psi_t
    _check_bounded(phi, psi, p, step_index)
    new_acc = acceleration(phi, psi, eps, p)
    phi_t += half * new_acc[0]
    psi_t += half * new_acc[1]
    return new_acc


def step(
    s: FieldState, dt: float, p: ModelParams = DEFAULT_PARAMS, step_index: int = 0
) -> FieldState:
    """One leapfrog step. A negative ``dt`` integrates backward in time."""
    out = s.copy()
    eps = s.grid.eps
    acc = acceleration(out.phi, out.psi, eps, p)
    _kdk(out.phi, out.psi, out.phi_t, out.psi_t, acc, dt, eps, p, step_index)
    return out


def _diagnostics(s: FieldState, step_index: int, t: float, p: ModelParams) -> dict:
    try:
        tracked = track_solitons(s, p)
        positions: list[float] | None = [round(sol.position, 9) for sol in tracked]
        sectors: list[str] | None = [sol.sector.name for sol in tracked]
    except ClassificationFailure as e:
        logger.debug(f"t={t:.3f}: tracking unavailable ({e})")
        positions, sectors = None, None
    return {
        "step": step_index,
        "t": t,
        "total_energy": total_energy(s, p),
        "total_momentum": total_momentum(s),
        "QH": charge_H(s, p),
        "QV": charge_V(s, p),
        "positions": positions,
        "sectors": sectors,
    }


def evolve(
    s: FieldState, cfg: EvolveConfig = EvolveConfig(), p: ModelParams = DEFAULT_PARAMS
) -> RunReport:
    """Integrate ``s`` to ``cfg.t_end``, storing a snapshot every ``cfg.snapshot_every`` steps.

    The first and the last state are always stored.

    Raises:
        InvalidInputError: dt violates the CFL bound.
        BlowUpError: The fields diverged.
    """
    eps = s.grid.eps
    dt = cfg.resolve_dt(eps)
    n_steps = cfg.n_steps(eps)

    current = s.copy()
    acc = acceleration(current.phi, current.psi, eps, p)
    snapshots = [current.copy()]
    times = [0.0]
    rows = [_diagnostics(current, 0, 0.0, p)]

    for n in range(1, n_steps + 1):
        acc = _kdk(current.phi, current.psi, current.phi_t, current.psi_t, acc, dt, eps, p, n)
        if n % cfg.snapshot_every == 0 or n == n_steps:
            t = n * dt
            snapshots.append(current.copy())
            times.append(t)
            rows.append(_diagnostics(current, n, t, p))

    diagnostics = pd.DataFrame(rows, columns=DIAGNOSTIC_COLUMNS)
    report = RunReport(
        snapshots=snapshots, diagnostics=diagnostics, dt=dt, steps=n_steps, times=times
    )
    logger.info(
        f"Evolved {n_steps} steps to t={n_steps * dt:.3f} (dt={dt:.4g}), "
        f"{len(snapshots)} snapshots, energy drift {report.energy_drift:.2e}"
    )
    return report
