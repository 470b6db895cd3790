"""
Discretization substrate: uniform grids, field states, stencils and integrated densities.

Two energy functionals live here:

- ``total_energy``: central differences + trapezoid rule. This is the reported mass.
- ``discrete_energy``: link differences (f[i+1]-f[i])/eps. This is the functional the relaxer
  minimizes. Its Euler-Lagrange operator is exactly ``laplacian_1d - grad_potential``, the
  evolver's force, so a converged relaxed state is a fixed point of the dynamics.
"""

from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import ArrayLike
from scipy.integrate import trapezoid

from soliton_lab.errors import InvalidInputError
from soliton_lab.models.field import ModelParams
from soliton_lab.physics.model import DEFAULT_PARAMS, grad_potential, potential

MIN_POINTS = 8

DEFAULT_X_MIN = -20.0
DEFAULT_X_MAX = 20.0
DEFAULT_EPS = 0.05


@dataclass(frozen=True)
class Grid:
    """Uniform 1D mesh with ``n`` points on [x_min, x_max]."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self) -> None:
        if self.n < MIN_POINTS:
            raise InvalidInputError(f"Grid needs at least {MIN_POINTS} points, got {self.n}")
        if not self.x_max > self.x_min:
            raise InvalidInputError(f"Empty grid extent [{self.x_min}, {self.x_max}]")

    @classmethod
    def from_spacing(cls, x_min: float, x_max: float, eps: float) -> "Grid":
        if eps <= 0:
            raise InvalidInputError(f"Grid spacing must be positive, got {eps}")
        n = int(round((x_max - x_min) / eps)) + 1
        return cls(x_min=float(x_min), x_max=float(x_max), n=n)

    @classmethod
    def default(cls) -> "Grid":
        return cls.from_spacing(DEFAULT_X_MIN, DEFAULT_X_MAX, DEFAULT_EPS)

    @property
    def eps(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def is_symmetric(self) -> bool:
        return bool(np.isclose(self.x_min, -self.x_max))


@dataclass
class FieldState:
    """Sampled (phi, psi) and their time derivatives on a grid.

    Arrays are owned by the state. ``relax`` updates a private copy in place; everything else
    returns new states.
    """

    grid: Grid
    phi: np.ndarray
    psi: np.ndarray
    phi_t: np.ndarray
    psi_t: np.ndarray

    def __post_init__(self) -> None:
        for name in ("phi", "psi", "phi_t", "psi_t"):
            values = np.asarray(getattr(self, name), dtype=float)
            if values.shape != (self.grid.n,):
                raise InvalidInputError(
                    f"{name} has shape {values.shape}, expected ({self.grid.n},)"
                )
            if not np.all(np.isfinite(values)):
                raise InvalidInputError(f"{name} contains non-finite values")
            setattr(self, name, values)

    @classmethod
    def static(cls, grid: Grid, phi: ArrayLike, psi: ArrayLike) -> "FieldState":
        return cls(
            grid=grid,
            phi=np.array(phi, dtype=float),
            psi=np.array(psi, dtype=float),
            phi_t=np.zeros(grid.n),
            psi_t=np.zeros(grid.n),
        )

    @classmethod
    def uniform(cls, grid: Grid, phi: float, psi: float) -> "FieldState":
        return cls.static(grid, np.full(grid.n, phi), np.full(grid.n, psi))

    def copy(self) -> "FieldState":
        return FieldState(
            grid=self.grid,
            phi=self.phi.copy(),
            psi=self.psi.copy(),
            phi_t=self.phi_t.copy(),
            psi_t=self.psi_t.copy(),
        )

    @property
    def is_static(self) -> bool:
        return not (np.any(self.phi_t) or np.any(self.psi_t))

    def endpoints(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """((phi, psi) at x_min, (phi, psi) at x_max)."""
        return (
            (float(self.phi[0]), float(self.psi[0])),
            (float(self.phi[-1]), float(self.psi[-1])),
        )


def laplacian_1d(f: ArrayLike, eps: float) -> np.ndarray:
    """Three-point second difference; endpoint entries are zero (pinned elsewhere)."""
    f = np.asarray(f, dtype=float)
    if f.size < 3:
        raise InvalidInputError(f"laplacian_1d needs at least 3 samples, got {f.size}")
    out = np.zeros_like(f)
    out[1:-1] = (f[:-2] - 2.0 * f[1:-1] + f[2:]) / eps**2
    return out


def energy_density(s: FieldState, p: ModelParams = DEFAULT_PARAMS) -> np.ndarray:
    """Hamiltonian density with central differences inside, one-sided at the endpoints."""
    eps = s.grid.eps
    phi_x = np.gradient(s.phi, eps)
    psi_x = np.gradient(s.psi, eps)
    kinetic = 0.5 * (s.phi_t**2 + s.psi_t**2)
    gradient = 0.5 * (phi_x**2 + psi_x**2)
    return kinetic + gradient + potential(s.phi, s.psi, p)


def total_energy(s: FieldState, p: ModelParams = DEFAULT_PARAMS) -> float:
    return float(trapezoid(energy_density(s, p), dx=s.grid.eps))


def momentum_density(s: FieldState) -> np.ndarray:
    eps = s.grid.eps
    return -(s.phi_t * np.gradient(s.phi, eps) + s.psi_t * np.gradient(s.psi, eps))


def total_momentum(s: FieldState) -> float:
    return float(trapezoid(momentum_density(s), dx=s.grid.eps))


def discrete_energy(s: FieldState, p: ModelParams = DEFAULT_PARAMS) -> float:
    """Link-difference energy functional minimized by the relaxer."""
    eps = s.grid.eps
    links = (np.sum(np.diff(s.phi) ** 2) + np.sum(np.diff(s.psi) ** 2)) / (2.0 * eps)
    on_site = 0.5 * (s.phi_t**2 + s.psi_t**2) + potential(s.phi, s.psi, p)
    return float(links + trapezoid(on_site, dx=eps))


def static_residual(
    s: FieldState, p: ModelParams = DEFAULT_PARAMS
) -> tuple[np.ndarray, np.ndarray]:
    """Residual of the static field equations f'' - dV/df.

    The second derivative is Richardson-extrapolated from the eps and 2*eps stencils, which
    makes the residual fourth-order accurate. The two outermost points on each side are zero.
    """
    eps = s.grid.eps
    dv_dphi, dv_dpsi = grad_potential(s.phi, s.psi, p)
    residuals = []
    for f, dv in ((s.phi, dv_dphi), (s.psi, dv_dpsi)):
        fine = laplacian_1d(f, eps)
        coarse = np.zeros_like(f)
        coarse[2:-2] = (f[:-4] - 2.0 * f[2:-2] + f[4:]) / (4.0 * eps**2)
        r = np.zeros_like(f)
        r[2:-2] = (4.0 * fine[2:-2] - coarse[2:-2]) / 3.0 - dv[2:-2]
        residuals.append(r)
    return residuals[0], residuals[1]


def reflect(s: FieldState) -> FieldState:
    """Parity x -> -x. Needs a grid symmetric about the origin."""
    if not s.grid.is_symmetric:
        raise InvalidInputError("reflect() needs a grid symmetric about x=0")
    return FieldState(
        grid=s.grid,
        phi=s.phi[::-1].copy(),
        psi=s.psi[::-1].copy(),
        phi_t=s.phi_t[::-1].copy(),
        psi_t=s.psi_t[::-1].copy(),
    )


def flip_signs(s: FieldState, phi_sign: int = 1, psi_sign: int = 1) -> FieldState:
    """(phi, psi) -> (phi_sign*phi, psi_sign*psi)."""
    if phi_sign not in (-1, 1) or psi_sign not in (-1, 1):
        raise InvalidInputError("signs must be +1 or -1")
    return replace(
        s,
        phi=phi_sign * s.phi,
        psi=psi_sign * s.psi,
        phi_t=phi_sign * s.phi_t,
        psi_t=psi_sign * s.psi_t,
    )


def swap_fields(s: FieldState) -> FieldState:
    """Duality phi <-> psi; a symmetry only when phi0 == psi0."""
    return replace(
        s, phi=s.psi.copy(), psi=s.phi.copy(), phi_t=s.psi_t.copy(), psi_t=s.phi_t.copy()
    )


def time_reverse(s: FieldState) -> FieldState:
    return replace(s, phi_t=-s.phi_t, psi_t=-s.psi_t)
