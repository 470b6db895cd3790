"""
Topological charges, sector classification and array consistency.

    Q_H = [phi(x_max) - phi(x_min)] / (2 phi0)
    Q_V = [psi(x_max) - psi(x_min)] / (2 psi0)
"""

from collections.abc import Sequence
from itertools import permutations

import numpy as np
from pydantic import ValidationError

from soliton_lab.errors import InvalidInputError, MultiSolitonError, UnclassifiableStateError
from soliton_lab.models.field import VACUUM_LABELS, ModelParams, SectorLabel, family_between
from soliton_lab.physics.lattice import FieldState
from soliton_lab.physics.model import DEFAULT_PARAMS, nearest_vacuum

DEFAULT_CHARGE_TOLERANCE = 0.05


def _endpoint_labels(s: FieldState, p: ModelParams, tolerance: float) -> tuple[str, str]:
    labels = []
    for side, (phi, psi) in zip(("x_min", "x_max"), s.endpoints(), strict=True):
        v, distance = nearest_vacuum(phi, psi, p)
        if distance >= tolerance:
            raise UnclassifiableStateError(
                f"{side} value ({phi:.4g}, {psi:.4g}) is {distance:.3g} away from vacuum {v.label}"
            )
        labels.append(v.label)
    return labels[0], labels[1]


def _snap_half(raw: float, tolerance: float) -> float:
    snapped = round(2.0 * raw) / 2.0
    if abs(raw - snapped) >= tolerance:
        raise UnclassifiableStateError(f"charge {raw:.4f} is not close to a half-integer")
    return snapped


def charge_H(
    s: FieldState, p: ModelParams = DEFAULT_PARAMS, tolerance: float = DEFAULT_CHARGE_TOLERANCE
) -> float:
    _endpoint_labels(s, p, tolerance)
    return _snap_half((s.phi[-1] - s.phi[0]) / (2.0 * p.phi0), tolerance)


def charge_V(
    s: FieldState, p: ModelParams = DEFAULT_PARAMS, tolerance: float = DEFAULT_CHARGE_TOLERANCE
) -> float:
    _endpoint_labels(s, p, tolerance)
    return _snap_half((s.psi[-1] - s.psi[0]) / (2.0 * p.psi0), tolerance)


def charges(
    s: FieldState, p: ModelParams = DEFAULT_PARAMS, tolerance: float = DEFAULT_CHARGE_TOLERANCE
) -> tuple[float, float]:
    """(Q_H, Q_V) of a state."""
    return charge_H(s, p, tolerance), charge_V(s, p, tolerance)


def classify_sector(
    s: FieldState, p: ModelParams = DEFAULT_PARAMS, tolerance: float = DEFAULT_CHARGE_TOLERANCE
) -> SectorLabel:
    """Single-soliton sector of a state from its boundary vacua.

    Raises:
        UnclassifiableStateError: An endpoint is off vacuum or both endpoints share a vacuum.
        MultiSolitonError: The boundary vacua are not adjacent.
    """
    start, end = _endpoint_labels(s, p, tolerance)
    if start == end:
        raise UnclassifiableStateError(f"both ends sit in vacuum {start}: topologically trivial")
    family = family_between(start, end)
    if family is None:
        raise MultiSolitonError(f"{start}->{end} needs more than one soliton")
    return SectorLabel(from_vacuum=start, to_vacuum=end, family=family)


def sector_charges(sector: SectorLabel | str) -> tuple[float, float]:
    if isinstance(sector, str):
        sector = SectorLabel.parse(sector)
    return sector.charges


def adjacent_sectors() -> list[SectorLabel]:
    """All 16 single-soliton sectors, in label order."""
    return [
        SectorLabel.between(u, w)
        for u, w in permutations(VACUUM_LABELS, 2)
        if family_between(u, w) is not None
    ]


def validate_array(sectors: Sequence[SectorLabel | str]) -> bool:
    """True when each soliton ends in the vacuum where the next one starts.

    Names that are not single-soliton sectors make the array forbidden.
    """
    if len(sectors) == 0:
        raise InvalidInputError("validate_array needs at least one sector")
    parsed: list[SectorLabel] = []
    for item in sectors:
        if isinstance(item, SectorLabel):
            parsed.append(item)
            continue
        try:
            parsed.append(SectorLabel.parse(item))
        except (ValidationError, ValueError):
            return False
    return all(a.to_vacuum == b.from_vacuum for a, b in zip(parsed, parsed[1:]))


def array_charges(sectors: Sequence[SectorLabel]) -> tuple[float, float]:
    """Summed (Q_H, Q_V) of an array."""
    totals = np.sum([s.charges for s in sectors], axis=0)
    return float(totals[0]), float(totals[1])
