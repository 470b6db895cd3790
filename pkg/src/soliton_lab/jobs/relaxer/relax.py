"""
Relaxation driver: repeated random sweeps with an annealed proposal amplitude.

Only energy-lowering variations are kept. The amplitude is multiplied by ``anneal_factor``
whenever a whole sweep accepts nothing, and the run stops when either the relative energy
decrease over ``window`` sweeps drops below ``tol`` or the amplitude falls below
``min_amplitude``.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd
from loguru import logger

from soliton_lab.errors import PreconditionError
from soliton_lab.jobs.relaxer.kernels import GUARD_PHI, NO_GUARD, sweep_kernel
from soliton_lab.models import ModelParams, RelaxConfig
from soliton_lab.models.field import family_between
from soliton_lab.physics.lattice import FieldState, discrete_energy, total_energy
from soliton_lab.physics.model import DEFAULT_PARAMS, nearest_vacuum

TRACE_COLUMNS = ["sweep", "total_energy", "accepted", "amplitude"]

# Pinned endpoints must sit on a vacuum up to round-off
ENDPOINT_TOLERANCE = 1e-9

UNGUARDED = (NO_GUARD, 1.0, 0.0)


@dataclass
class RelaxResult:
    """Relaxed state plus the sweep-by-sweep trace of the minimized functional."""

    state: FieldState
    trace: pd.DataFrame
    converged: bool
    sweeps: int
    reason: str
    params: ModelParams = DEFAULT_PARAMS

    @property
    def energy(self) -> float:
        """Reported mass (central-difference energy) of the relaxed state."""
        return total_energy(self.state, self.params)


def _check_seed(seed: FieldState, p: ModelParams) -> None:
    if not seed.is_static:
        raise PreconditionError("relaxation needs a static seed (zero time derivatives)")
    for side, (phi, psi) in zip(("x_min", "x_max"), seed.endpoints(), strict=True):
        v, distance = nearest_vacuum(phi, psi, p)
        if distance > ENDPOINT_TOLERANCE:
            raise PreconditionError(
                f"seed value at {side} ({phi:.6g}, {psi:.6g}) is not a vacuum "
                f"(nearest {v.label} at distance {distance:.3g})"
            )


def core_guard(
    seed: FieldState, cfg: RelaxConfig, p: ModelParams = DEFAULT_PARAMS
) -> tuple[int, float, float]:
    """Kernel guard that keeps a V sector from relaxing into a pair of D solitons.

    Between two corners with the same phi, the unconstrained minimum is two free D solitons
    with the central vacuum in between. The guard keeps phi on the side of its boundary value,
    at least ``v_core_floor * phi0`` away from zero. Other sectors are left unguarded.

    Returns:
        (guarded field code, sign, floor) for ``sweep_kernel``.
    """
    (phi_left, psi_left), (phi_right, psi_right) = seed.endpoints()
    left, _ = nearest_vacuum(phi_left, psi_left, p)
    right, _ = nearest_vacuum(phi_right, psi_right, p)
    if cfg.v_core_floor == 0.0 or family_between(left.label, right.label) != "V":
        return UNGUARDED
    return GUARD_PHI, float(np.sign(phi_left)), cfg.v_core_floor * p.phi0


def _run_sweep(
    state: FieldState,
    amplitude: float,
    rng: np.random.Generator,
    p: ModelParams,
    guard: tuple[int, float, float] = UNGUARDED,
) -> tuple[int, float]:
    interior = np.arange(1, state.grid.n - 1)
    order = rng.permutation(interior)
    proposals = rng.uniform(-amplitude, amplitude, size=(2, interior.size))
    accepted, delta = sweep_kernel(
        state.phi, state.psi, order, proposals, state.grid.eps, p.phi0, p.psi0, *guard
    )
    return int(accepted), float(delta)


def sweep(
    state: FieldState,
    amplitude: float,
    rng: np.random.Generator,
    p: ModelParams = DEFAULT_PARAMS,
) -> int:
    """One pass over every interior site in random order, updating ``state`` in place.

    Returns:
        Number of accepted proposals.
    """
    accepted, _ = _run_sweep(state, amplitude, rng, p)
    return accepted


def relax(
    seed: FieldState,
    cfg: RelaxConfig = RelaxConfig(),
    p: ModelParams = DEFAULT_PARAMS,
) -> RelaxResult:
    """Minimize the discrete energy starting from ``seed``.

    V sectors relax under the core guard of :func:`core_guard`. The seed is not modified.
    Running out of sweeps does not raise: the result comes back with ``converged=False``.

    Args:
        seed: Static state whose endpoints sit exactly on vacua.
        cfg: Relaxation settings.
        p: Model constants.

    Returns:
        RelaxResult with the relaxed state and its energy trace.
    """
    _check_seed(seed, p)
    state = seed.copy()
    rng = np.random.default_rng(cfg.rng_seed)
    guard = core_guard(seed, cfg, p)
    if guard != UNGUARDED:
        logger.debug(f"Guarding the V core: sign(phi)*phi >= {guard[2]:.3g}")

    energy = discrete_energy(state, p)
    history = [energy]
    rows: list[tuple[int, float, int, float]] = [(0, energy, 0, cfg.step_amplitude)]
    amplitude = cfg.step_amplitude
    converged = False
    reason = "max_sweeps"
    n_sweeps = 0

    for n_sweeps in range(1, cfg.max_sweeps + 1):
        accepted, delta = _run_sweep(state, amplitude, rng, p, guard)
        previous = energy
        energy = previous + delta
        assert energy <= previous, "relaxation increased the energy"
        history.append(energy)
        rows.append((n_sweeps, energy, accepted, amplitude))

        if n_sweeps % cfg.log_every == 0:
            logger.debug(
                f"sweep {n_sweeps}: E={energy:.9g} accepted={accepted} amplitude={amplitude:.3g}"
            )

        if accepted == 0:
            amplitude *= cfg.anneal_factor
            if amplitude < cfg.min_amplitude:
                converged, reason = True, "amplitude"
                break

        if n_sweeps >= cfg.window:
            reference = history[n_sweeps - cfg.window]
            decrease = (reference - energy) / max(abs(reference), np.finfo(float).tiny)
            if decrease < cfg.tol:
                converged, reason = True, "window"
                break

    trace = pd.DataFrame(rows, columns=TRACE_COLUMNS)
    result = RelaxResult(
        state=state, trace=trace, converged=converged, sweeps=n_sweeps, reason=reason, params=p
    )
    level = "INFO" if converged else "WARNING"
    logger.log(
        level,
        f"Relaxation {'converged' if converged else 'stopped'} after {n_sweeps} sweeps "
        f"({reason}): E {history[0]:.6g} -> {energy:.6g}",
    )
    return result
