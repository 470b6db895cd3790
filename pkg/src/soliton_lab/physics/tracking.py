"""
Soliton tracker: splits a state into near-vacuum plateaus and the transition zones between them.
"""

from typing import NamedTuple

import numpy as np

from soliton_lab.errors import TrackingAmbiguousError
from soliton_lab.models.field import ModelParams, SectorLabel, family_between
from soliton_lab.physics.lattice import FieldState, energy_density
from soliton_lab.physics.model import DEFAULT_PARAMS, barrier_density, nearest_vacuum, potential

DEFAULT_THRESHOLD_FRACTION = 0.1
DEFAULT_PLATEAU_TOLERANCE = 0.25
# Plateaus narrower than this (in x units) are dips inside one zone, not vacuum regions
DEFAULT_MIN_PLATEAU_WIDTH = 0.5
# Interior plateaus whose potential never drops below this fraction of the barrier are dips
# inside one soliton core
DEFAULT_PLATEAU_DEPTH = 0.01


class TrackedSoliton(NamedTuple):
    position: float
    sector: SectorLabel


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Half-open [start, stop) index ranges where ``mask`` is True."""
    padded = np.concatenate(([False], mask, [False])).astype(np.int8)
    edges = np.flatnonzero(np.diff(padded))
    return list(zip(edges[::2].tolist(), edges[1::2].tolist(), strict=True))


def _merge_close(zones: list[tuple[int, int]], min_gap: int) -> list[tuple[int, int]]:
    """Join neighbouring zones separated by fewer than ``min_gap`` samples."""
    merged = [zones[0]]
    for start, stop in zones[1:]:
        if start - merged[-1][1] < min_gap:
            merged[-1] = (merged[-1][0], stop)
        else:
            merged.append((start, stop))
    return merged


def _merge_shallow(
    s: FieldState, zones: list[tuple[int, int]], p: ModelParams, floor: float
) -> list[tuple[int, int]]:
    """Join neighbouring zones whose separating plateau stays above ``floor`` in potential."""
    merged = [zones[0]]
    for start, stop in zones[1:]:
        gap = potential(s.phi[merged[-1][1] : start], s.psi[merged[-1][1] : start], p)
        if gap.min() > floor:
            merged[-1] = (merged[-1][0], stop)
        else:
            merged.append((start, stop))
    return merged


def _plateau_vacuum(
    s: FieldState, start: int, stop: int, p: ModelParams, tolerance: float
) -> str:
    # The deepest point of the plateau is the least contaminated by tails and radiation
    values = potential(s.phi[start:stop], s.psi[start:stop], p)
    idx = start + int(np.argmin(values))
    v, distance = nearest_vacuum(float(s.phi[idx]), float(s.psi[idx]), p)
    if distance > tolerance:
        raise TrackingAmbiguousError(
            f"plateau [{s.grid.x[start]:.2f}, {s.grid.x[stop - 1]:.2f}] is {distance:.3g} "
            f"away from the nearest vacuum {v.label}"
        )
    return v.label


def track_solitons(
    s: FieldState,
    p: ModelParams = DEFAULT_PARAMS,
    threshold_fraction: float = DEFAULT_THRESHOLD_FRACTION,
    plateau_tolerance: float = DEFAULT_PLATEAU_TOLERANCE,
    min_plateau_width: float = DEFAULT_MIN_PLATEAU_WIDTH,
    plateau_depth: float = DEFAULT_PLATEAU_DEPTH,
) -> list[TrackedSoliton]:
    """Locate and label the solitons of a state, left to right.

    A transition zone is a contiguous run where the energy density exceeds
    ``threshold_fraction`` times the largest potential barrier between adjacent vacua. Its
    position is the energy-weighted centroid. Zones closer than ``min_plateau_width`` are
    merged, so a ripple riding on a plateau counts as one zone. So are zones separated by a
    plateau whose potential stays above ``plateau_depth`` times the barrier. Zones with the
    same vacuum on both sides carry no charge (radiation) and are skipped.

    Raises:
        TrackingAmbiguousError: A zone touches the boundary, a plateau is not near a vacuum, or
            the vacua flanking a zone are not adjacent (overlapping solitons).
    """
    density = energy_density(s, p)
    barrier = barrier_density(p)
    above = density > threshold_fraction * barrier
    zones = _runs(above)
    if not zones:
        return []
    min_gap = max(1, int(np.ceil(min_plateau_width / s.grid.eps)))
    zones = _merge_shallow(s, _merge_close(zones, min_gap), p, plateau_depth * barrier)
    for start, stop in zones:
        above[start:stop] = True
    if zones[0][0] == 0 or zones[-1][1] == s.grid.n:
        raise TrackingAmbiguousError("transition zone reaches the grid boundary")

    plateaus = _runs(~above)
    vacua = [_plateau_vacuum(s, a, b, p, plateau_tolerance) for a, b in plateaus]

    x = s.grid.x
    found: list[TrackedSoliton] = []
    # Plateaus and zones alternate, starting and ending with a plateau
    for k, (start, stop) in enumerate(zones):
        left, right = vacua[k], vacua[k + 1]
        if left == right:
            continue
        family = family_between(left, right)
        if family is None:
            raise TrackingAmbiguousError(
                f"zone [{x[start]:.2f}, {x[stop - 1]:.2f}] joins non-adjacent vacua {left}, {right}"
            )
        weights = density[start:stop]
        position = float(np.sum(weights * x[start:stop]) / np.sum(weights))
        found.append(
            TrackedSoliton(position, SectorLabel(from_vacuum=left, to_vacuum=right, family=family))
        )
    return found
