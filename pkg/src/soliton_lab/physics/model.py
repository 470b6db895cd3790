"""
The coupled two-field potential, its gradient and its five vacua.

    V(phi, psi) = phi^2 (psi^2 - psi0^2)^2 + psi^2 (phi^2 - phi0^2)^2

All functions accept scalars or numpy arrays and broadcast.
"""

import numpy as np
from numpy.typing import ArrayLike

from soliton_lab.models.field import VACUUM_LABELS, VACUUM_UNIT_COORDS, ModelParams, VacuumPoint

DEFAULT_PARAMS = ModelParams()


def potential(phi: ArrayLike, psi: ArrayLike, p: ModelParams = DEFAULT_PARAMS) -> np.ndarray:
    """Energy density of the self-interaction; non-negative everywhere."""
    phi = np.asarray(phi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    return phi**2 * (psi**2 - p.psi0**2) ** 2 + psi**2 * (phi**2 - p.phi0**2) ** 2


def grad_potential(
    phi: ArrayLike, psi: ArrayLike, p: ModelParams = DEFAULT_PARAMS
) -> tuple[np.ndarray, np.ndarray]:
    """(dV/dphi, dV/dpsi)."""
    phi = np.asarray(phi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    a = phi**2 - p.phi0**2
    b = psi**2 - p.psi0**2
    dv_dphi = 2 * phi * b**2 + 4 * phi * psi**2 * a
    dv_dpsi = 2 * psi * a**2 + 4 * psi * phi**2 * b
    return dv_dphi, dv_dpsi


def vacua(p: ModelParams = DEFAULT_PARAMS) -> list[VacuumPoint]:
    """The five zeros of the potential in label order A..E."""
    return [vacuum(label, p) for label in VACUUM_LABELS]


def vacuum(label: str, p: ModelParams = DEFAULT_PARAMS) -> VacuumPoint:
    unit_phi, unit_psi = VACUUM_UNIT_COORDS[label]
    return VacuumPoint(label=label, phi=unit_phi * p.phi0, psi=unit_psi * p.psi0)


def nearest_vacuum(
    phi: float, psi: float, p: ModelParams = DEFAULT_PARAMS
) -> tuple[VacuumPoint, float]:
    """Closest vacuum to (phi, psi) and its Euclidean distance in field space."""
    points = vacua(p)
    distances = [float(np.hypot(phi - v.phi, psi - v.psi)) for v in points]
    best = int(np.argmin(distances))
    return points[best], distances[best]


def barrier_density(p: ModelParams = DEFAULT_PARAMS, samples: int = 201) -> float:
    """Largest potential value on the straight segments joining adjacent vacua.

    Sets the energy-density scale that separates soliton cores from near-vacuum plateaus.
    """
    t = np.linspace(0.0, 1.0, samples)
    corner_pairs = [("B", "C"), ("D", "E"), ("D", "B"), ("E", "C")]
    pairs = [("A", label) for label in "BCDE"] + corner_pairs
    peak = 0.0
    for start, end in pairs:
        u, w = vacuum(start, p), vacuum(end, p)
        values = potential(u.phi + t * (w.phi - u.phi), u.psi + t * (w.psi - u.psi), p)
        peak = max(peak, float(values.max()))
    return peak
