"""
Analytic starting configurations and the D-orbit law.

- Closed-form ansaetze: the constrained one-field kinks obtained by freezing psi=psi0 (H),
  phi=phi0 (V) or moving on the ray psi=(psi0/phi0)*phi (D).
- The exact symmetric D solution and the first-order (BPS) integration, both for phi0 == psi0.
- Lorentz boosts of static profiles.
"""

import math

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import expit

from soliton_lab.errors import (
    InvalidInputError,
    NonConvergenceError,
    OrbitDomainError,
    PreconditionError,
)
from soliton_lab.models.field import VACUUM_UNIT_COORDS, ModelParams, SectorLabel, SeedSpec
from soliton_lab.physics.charges import validate_array
from soliton_lab.physics.lattice import FieldState, Grid, reflect
from soliton_lab.physics.model import DEFAULT_PARAMS, nearest_vacuum, vacuum

SQRT2 = math.sqrt(2.0)

# Matching U = ½λ²[phi²(psi²-a²)² + psi²(phi²-a²)²] to the potential forces ½λ² = 1
BPS_LAMBDA = SQRT2

BPS_DIVERGENCE_FACTOR = 10.0
BPS_SNAP_TOLERANCE = 1e-13


def _pin_endpoints(phi: np.ndarray, psi: np.ndarray, p: ModelParams) -> None:
    for idx in (0, -1):
        v, _ = nearest_vacuum(float(phi[idx]), float(psi[idx]), p)
        phi[idx], psi[idx] = v.phi, v.psi


def _check_sign(name: str, value: int) -> None:
    if value not in (-1, 1):
        raise InvalidInputError(f"{name} must be +1 or -1, got {value}")


def seed_H(
    grid: Grid,
    sign: int = 1,
    psi_branch: int = 1,
    center: float = 0.0,
    p: ModelParams = DEFAULT_PARAMS,
) -> FieldState:
    """phi = sign*phi0*tanh(sqrt2*psi0*phi0*(x-x0)) with psi frozen at psi_branch*psi0."""
    _check_sign("sign", sign)
    _check_sign("psi_branch", psi_branch)
    k = SQRT2 * p.psi0 * p.phi0
    phi = sign * p.phi0 * np.tanh(k * (grid.x - center))
    psi = np.full(grid.n, psi_branch * p.psi0)
    _pin_endpoints(phi, psi, p)
    return FieldState.static(grid, phi, psi)


def seed_V(
    grid: Grid,
    sign: int = 1,
    phi_branch: int = 1,
    center: float = 0.0,
    p: ModelParams = DEFAULT_PARAMS,
) -> FieldState:
    """psi = sign*psi0*tanh(sqrt2*phi0*psi0*(x-x0)) with phi frozen at phi_branch*phi0."""
    _check_sign("sign", sign)
    _check_sign("phi_branch", phi_branch)
    k = SQRT2 * p.phi0 * p.psi0
    phi = np.full(grid.n, phi_branch * p.phi0)
    psi = sign * p.psi0 * np.tanh(k * (grid.x - center))
    _pin_endpoints(phi, psi, p)
    return FieldState.static(grid, phi, psi)


def seed_D_ansatz(
    grid: Grid,
    phi_sign: int = 1,
    psi_sign: int = 1,
    exponent_sign: int = -1,
    center: float = 0.0,
    p: ModelParams = DEFAULT_PARAMS,
) -> FieldState:
    """Diagonal ansatz on the ray psi = (psi0/phi0)*phi.

    psi^2 = psi0^2 / (1 + exp(exponent_sign * 2*sqrt2*phi0*psi0 * (x-x0))).
    ``exponent_sign=-1`` runs A -> corner, ``+1`` runs corner -> A. The corner is
    (phi_sign*phi0, psi_sign*psi0).
    """
    _check_sign("phi_sign", phi_sign)
    _check_sign("psi_sign", psi_sign)
    _check_sign("exponent_sign", exponent_sign)
    r = 2.0 * SQRT2 * p.phi0 * p.psi0
    profile = np.sqrt(expit(-exponent_sign * r * (grid.x - center)))
    phi = phi_sign * p.phi0 * profile
    psi = psi_sign * p.psi0 * profile
    _pin_endpoints(phi, psi, p)
    return FieldState.static(grid, phi, psi)


def seed_D_exact_symmetric(
    grid: Grid,
    center: float = 0.0,
    p: ModelParams = ModelParams(phi0=1.0, psi0=1.0),
    phi_sign: int = 1,
    psi_sign: int = 1,
    exponent_sign: int = -1,
) -> FieldState:
    """phi^2 = psi^2 = ½a²[1 + tanh(λa²(x-x0))], exact when phi0 == psi0 == a.

    Branch selectors are explicit; ``exponent_sign=+1`` gives the corner -> A antikink.
    """
    if not p.is_dual_symmetric:
        raise PreconditionError(
            f"exact symmetric D solution needs phi0 == psi0, got ({p.phi0}, {p.psi0})"
        )
    _check_sign("phi_sign", phi_sign)
    _check_sign("psi_sign", psi_sign)
    _check_sign("exponent_sign", exponent_sign)
    a = p.phi0
    squared = 0.5 * a**2 * (1.0 - exponent_sign * np.tanh(BPS_LAMBDA * a**2 * (grid.x - center)))
    root = np.sqrt(squared)
    phi, psi = phi_sign * root, psi_sign * root
    _pin_endpoints(phi, psi, p)
    return FieldState.static(grid, phi, psi)


def seed_for_sector(
    sector: SectorLabel,
    grid: Grid,
    p: ModelParams = DEFAULT_PARAMS,
    center: float = 0.0,
) -> FieldState:
    """closed-form ansatz interpolating the two boundary vacua of ``sector``."""
    start = VACUUM_UNIT_COORDS[sector.from_vacuum]
    end = VACUUM_UNIT_COORDS[sector.to_vacuum]
    if sector.family == "H":
        sign = 1 if end[0] > start[0] else -1
        return seed_H(grid, sign=sign, psi_branch=start[1], center=center, p=p)
    if sector.family == "V":
        sign = 1 if end[1] > start[1] else -1
        return seed_V(grid, sign=sign, phi_branch=start[0], center=center, p=p)
    corner = end if sector.from_vacuum == "A" else start
    exponent_sign = -1 if sector.from_vacuum == "A" else 1
    return seed_D_ansatz(
        grid,
        phi_sign=corner[0],
        psi_sign=corner[1],
        exponent_sign=exponent_sign,
        center=center,
        p=p,
    )


def build_seed(spec: SeedSpec, grid: Grid, p: ModelParams = DEFAULT_PARAMS) -> FieldState:
    """Materialize a SeedSpec, boosting it when ``spec.velocity`` is non-zero."""
    sector = spec.sector
    expected_family = spec.kind if spec.kind in ("H", "V") else "D"
    if sector.family != expected_family:
        raise InvalidInputError(f"{spec.kind} seed cannot realize sector {sector.name}")

    if spec.kind in ("H", "V", "D_ansatz"):
        state = seed_for_sector(sector, grid, p, center=spec.center)
    else:
        outward = sector.from_vacuum == "A"
        corner = sector.to_vacuum if outward else sector.from_vacuum
        phi_sign, psi_sign = VACUUM_UNIT_COORDS[corner]
        if spec.kind == "D_exact_symmetric":
            state = seed_D_exact_symmetric(
                grid,
                center=spec.center,
                p=p,
                phi_sign=phi_sign,
                psi_sign=psi_sign,
                exponent_sign=-1 if outward else 1,
            )
        elif outward:
            state = bps_integrate(grid, p, corner=corner, center=spec.center)
        else:
            state = reflect(bps_integrate(grid, p, corner=corner, center=-spec.center))

    if spec.velocity:
        state = boost(state, spec.velocity, center=spec.center)
    return state


def build_array(
    sectors: list[SectorLabel],
    centers: list[float],
    grid: Grid,
    p: ModelParams = DEFAULT_PARAMS,
) -> FieldState:
    """Superpose single-soliton seeds of an allowed array, left to right.

    Each seed contributes its step away from its own starting vacuum, so the plateaus between
    well-separated solitons sit at the shared vacua.
    """
    if len(sectors) != len(centers):
        raise InvalidInputError("one center per sector is required")
    if not validate_array(sectors):
        names = [s.name for s in sectors]
        raise InvalidInputError(f"forbidden array: {names}")
    if list(centers) != sorted(centers):
        raise InvalidInputError("array centers must be increasing")

    first = vacuum(sectors[0].from_vacuum, p)
    phi = np.full(grid.n, first.phi)
    psi = np.full(grid.n, first.psi)
    for sector, center in zip(sectors, centers, strict=True):
        seed = seed_for_sector(sector, grid, p, center=center)
        origin = vacuum(sector.from_vacuum, p)
        phi += seed.phi - origin.phi
        psi += seed.psi - origin.psi
    _pin_endpoints(phi, psi, p)
    return FieldState.static(grid, phi, psi)


# ---------------------------------------------------------------------------
# First-order (BPS) reduction, phi0 == psi0 == a
# ---------------------------------------------------------------------------


def _bps_flow(phi: float, psi: float, a: float) -> tuple[float, float]:
    return (
        -BPS_LAMBDA * phi * (psi * psi - a * a),
        -BPS_LAMBDA * psi * (phi * phi - a * a),
    )


def _rk4_step(phi: float, psi: float, h: float, a: float) -> tuple[float, float]:
    k1 = _bps_flow(phi, psi, a)
    k2 = _bps_flow(phi + 0.5 * h * k1[0], psi + 0.5 * h * k1[1], a)
    k3 = _bps_flow(phi + 0.5 * h * k2[0], psi + 0.5 * h * k2[1], a)
    k4 = _bps_flow(phi + h * k3[0], psi + h * k3[1], a)
    return (
        phi + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        psi + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    )


def _advance(phi: float, psi: float, delta: float, a: float, max_h: float) -> tuple[float, float]:
    """Integrate the first-order flow over ``delta`` (either sign) with steps <= max_h."""
    if delta == 0.0:
        return phi, psi
    n_sub = max(1, math.ceil(abs(delta) / max_h - 1e-9))
    h = delta / n_sub
    for _ in range(n_sub):
        phi, psi = _rk4_step(phi, psi, h, a)
    if not (math.isfinite(phi) and math.isfinite(psi)) or max(abs(phi), abs(psi)) > (
        BPS_DIVERGENCE_FACTOR * a
    ):
        raise NonConvergenceError(
            f"first-order integration diverged at (phi, psi)=({phi:.3g}, {psi:.3g})"
        )
    return phi, psi


def _trace(
    phi: float,
    psi: float,
    offsets: np.ndarray,
    a: float,
    max_h: float,
    target: tuple[float, float],
) -> np.ndarray:
    """Values of the flow at monotone ``offsets`` from the start, snapping onto ``target``."""
    out = np.empty((len(offsets), 2))
    position = 0.0
    snapped = False
    for k, xi in enumerate(offsets):
        if not snapped:
            phi, psi = _advance(phi, psi, float(xi) - position, a, max_h)
            position = float(xi)
            if math.hypot(phi - target[0], psi - target[1]) < BPS_SNAP_TOLERANCE:
                phi, psi = target
                snapped = True
        out[k] = phi, psi
    return out


def _locate_center(
    phi: float, psi: float, a: float, eps: float, max_h: float, span: float
) -> float:
    """Offset (negative) from the start to where phi^2 + psi^2 = a^2, going toward A."""
    position = 0.0
    radius = phi * phi + psi * psi - a * a
    while radius > 0.0:
        if -position > span:
            raise NonConvergenceError("first-order orbit never left the corner vacuum")
        prev_phi, prev_psi, prev_position = phi, psi, position
        phi, psi = _advance(phi, psi, -eps, a, max_h)
        position -= eps
        radius = phi * phi + psi * psi - a * a

    # Newton refinement on the bracketing interval, stepping back from the outer point
    prev_radius = prev_phi**2 + prev_psi**2 - a * a
    tau = eps * prev_radius / (prev_radius - radius)
    for _ in range(4):
        cur_phi, cur_psi = _advance(prev_phi, prev_psi, -tau, a, max_h)
        g = cur_phi**2 + cur_psi**2 - a * a
        f_phi, f_psi = _bps_flow(cur_phi, cur_psi, a)
        slope = -2.0 * (cur_phi * f_phi + cur_psi * f_psi)
        if slope == 0.0:
            break
        tau -= g / slope
    return prev_position - tau


def bps_integrate(
    grid: Grid,
    p: ModelParams = ModelParams(phi0=1.0, psi0=1.0),
    corner: str = "C",
    start: tuple[float, float] | None = None,
    center: float = 0.0,
    displacement: float = 1e-4,
    substeps: int = 4,
) -> FieldState:
    """Kink A -> corner from the first-order equations

        dphi/dx = -λ phi (psi² - a²),    dpsi/dx = -λ psi (phi² - a²)

    integrated with fixed-step RK4 (``substeps`` steps per grid cell). The start point sits
    ``displacement`` off the corner along its eigenvector toward A, unless ``start`` is given.
    The profile is integrated from there in both directions and placed so that
    phi² + psi² = a² at ``center``.
    """
    if not p.is_dual_symmetric:
        raise PreconditionError(
            f"first-order reduction needs phi0 == psi0, got ({p.phi0}, {p.psi0})"
        )
    a = p.phi0
    if start is None:
        if corner not in ("B", "C", "D", "E"):
            raise InvalidInputError(f"corner must be one of B, C, D, E, got {corner!r}")
        target = vacuum(corner, p)
        shrink = 1.0 - displacement / (a * SQRT2)
        start = (target.phi * shrink, target.psi * shrink)
    else:
        target, distance = nearest_vacuum(start[0], start[1], p)
        if target.is_center or distance > 0.01 * a:
            raise InvalidInputError(f"start {start} is not close to a corner vacuum")

    eps = grid.eps
    max_h = eps / substeps
    offset_to_center = _locate_center(start[0], start[1], a, eps, max_h, span=grid.length)

    # Grid point x_j sits at flow coordinate xi_j = x_j - center + offset_to_center
    xi = grid.x - center + offset_to_center
    split = int(np.searchsorted(xi, 0.0))
    forward = _trace(start[0], start[1], xi[split:], a, max_h, (target.phi, target.psi))
    backward = _trace(start[0], start[1], xi[:split][::-1], a, max_h, (0.0, 0.0))[::-1]

    values = np.vstack([backward, forward])
    phi, psi = values[:, 0].copy(), values[:, 1].copy()
    _pin_endpoints(phi, psi, p)
    return FieldState.static(grid, phi, psi)


# ---------------------------------------------------------------------------
# D-orbit law
# ---------------------------------------------------------------------------


def _orbit_side(f: np.ndarray, f0: float) -> np.ndarray:
    return (f**2 - f0**2) - f0**2 * np.log(f**2 / f0**2)


def orbit_residual(phi: float, psi: float, p: ModelParams = DEFAULT_PARAMS) -> float:
    """Left minus right side of the closed-form D-orbit law at (phi, psi)."""
    if phi == 0 or psi == 0:
        raise OrbitDomainError("orbit law is singular on the axes (central vacuum)")
    return float(_orbit_side(np.asarray(phi), p.phi0) - _orbit_side(np.asarray(psi), p.psi0))


def orbit_residuals(
    phi: ArrayLike, psi: ArrayLike, p: ModelParams = DEFAULT_PARAMS, min_abs: float = 0.0
) -> np.ndarray:
    """Vectorized orbit residual; NaN where min(|phi|, |psi|) <= min_abs or a field is zero."""
    phi = np.asarray(phi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    valid = (np.minimum(np.abs(phi), np.abs(psi)) > min_abs) & (phi != 0) & (psi != 0)
    out = np.full(phi.shape, np.nan)
    out[valid] = _orbit_side(phi[valid], p.phi0) - _orbit_side(psi[valid], p.psi0)
    return out


# ---------------------------------------------------------------------------
# Lorentz boost
# ---------------------------------------------------------------------------


def boost(s: FieldState, v: float, center: float = 0.0) -> FieldState:
    """Boost a static profile: f(x) -> f(center + γ(x - center)), f_t = -γ v f'.

    Endpoint velocities stay zero (pinned boundaries).
    """
    if abs(v) >= 1.0:
        raise InvalidInputError(f"|v| must be < 1, got {v}")
    if not s.is_static:
        raise InvalidInputError("boost() expects a static state")
    if v == 0.0:
        return s.copy()

    gamma = 1.0 / math.sqrt(1.0 - v * v)
    x = s.grid.x
    contracted = center + gamma * (x - center)
    fields = []
    for f in (s.phi, s.psi):
        slope = np.gradient(f, s.grid.eps)
        value = np.interp(contracted, x, f)
        velocity = -gamma * v * np.interp(contracted, x, slope)
        velocity[0] = velocity[-1] = 0.0
        fields.append((value, velocity))
    (phi, phi_t), (psi, psi_t) = fields
    return FieldState(grid=s.grid, phi=phi, psi=psi, phi_t=phi_t, psi_t=psi_t)
