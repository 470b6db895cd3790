"""
Compiled accept/reject sweep over the interior sites.
"""

import numpy as np
from numba import njit

# Guarded-field codes understood by sweep_kernel
NO_GUARD = -1
GUARD_PHI = 0
GUARD_PSI = 1


@njit(cache=True)
def _potential(phi: float, psi: float, phi0: float, psi0: float) -> float:
    a = phi * phi - phi0 * phi0
    b = psi * psi - psi0 * psi0
    return phi * phi * b * b + psi * psi * a * a


@njit(cache=True)
def _link_change(left: float, old: float, new: float, right: float) -> float:
    # Factored difference of squares, exactly zero when new == old
    step = new - old
    return step * (new + old - 2.0 * left) - step * (2.0 * right - new - old)


@njit(cache=True)
def _violates_guard(old: float, new: float, sign: float, floor: float) -> bool:
    # A site already below the floor may still move back up towards it
    return sign * new < floor and sign * new < sign * old


@njit(cache=True)
def sweep_kernel(
    phi: np.ndarray,
    psi: np.ndarray,
    order: np.ndarray,
    proposals: np.ndarray,
    eps: float,
    phi0: float,
    psi0: float,
    guard_field: int = NO_GUARD,
    guard_sign: float = 1.0,
    guard_floor: float = 0.0,
) -> tuple[int, float]:
    """Visit ``order`` once, keeping each proposal that strictly lowers the discrete energy.

    ``proposals[:, k]`` is the (dphi, dpsi) offered to site ``order[k]``. Only the on-site
    potential and the two links touching the site change, so the energy difference is local.
    With a guard, proposals that push ``guard_sign * field`` below ``guard_floor`` are refused.
    Returns (accepted count, summed energy change).
    """
    accepted = 0
    delta = 0.0
    half_inv_eps = 0.5 / eps
    for k in range(order.size):
        i = order[k]
        old_phi = phi[i]
        old_psi = psi[i]
        new_phi = old_phi + proposals[0, k]
        new_psi = old_psi + proposals[1, k]
        if new_phi == old_phi and new_psi == old_psi:
            continue
        if guard_field == GUARD_PHI and _violates_guard(old_phi, new_phi, guard_sign, guard_floor):
            continue
        if guard_field == GUARD_PSI and _violates_guard(old_psi, new_psi, guard_sign, guard_floor):
            continue
        d_site = _potential(new_phi, new_psi, phi0, psi0) - _potential(
            old_phi, old_psi, phi0, psi0
        )
        d_links = _link_change(phi[i - 1], old_phi, new_phi, phi[i + 1]) + _link_change(
            psi[i - 1], old_psi, new_psi, psi[i + 1]
        )
        d_energy = eps * d_site + half_inv_eps * d_links
        if d_energy < 0.0:
            phi[i] = new_phi
            psi[i] = new_psi
            accepted += 1
            delta += d_energy
    return accepted, delta
