"""
Tests for topological charges, sector classification and array validation.
"""

import numpy as np
import pytest

from soliton_lab.errors import (
    InvalidInputError,
    MultiSolitonError,
    UnclassifiableStateError,
)
from soliton_lab.models import SectorLabel
from soliton_lab.physics.charges import (
    adjacent_sectors,
    array_charges,
    charge_H,
    charge_V,
    charges,
    classify_sector,
    sector_charges,
    validate_array,
)
from soliton_lab.physics.lattice import FieldState
from soliton_lab.physics.seeds import build_array, seed_for_sector


def _step_state(grid, left, right):
    """Static state jumping from vacuum ``left`` to ``right`` at x = 0."""
    phi = np.where(grid.x < 0, left[0], right[0])
    psi = np.where(grid.x < 0, left[1], right[1])
    return FieldState.static(grid, phi, psi)


class TestCharges:
    """Tests for charge_H(), charge_V() and charges()."""

    def test_h_sector(self, params, default_grid):
        s = seed_for_sector(SectorLabel.parse("H_BC"), default_grid, params)

        assert charge_H(s, params) == 1.0
        assert charge_V(s, params) == 0.0

    def test_d_sectors_carry_half_charges(self, params, default_grid):
        s = seed_for_sector(SectorLabel.parse("D_EA"), default_grid, params)
        assert charges(s, params) == (-0.5, 0.5)

    def test_small_endpoint_noise_is_snapped(self, params, default_grid):
        """Endpoints within tolerance of a vacuum give exact half-integers."""
        s = _step_state(default_grid, (-1.0, 2.0), (1.0, 2.0))
        s.phi[-1] = 1.01

        assert charge_H(s, params) == 1.0

    def test_off_vacuum_endpoint_rejected(self, params, default_grid):
        s = _step_state(default_grid, (-1.0, 2.0), (0.5, 2.0))
        with pytest.raises(UnclassifiableStateError):
            charges(s, params)

    def test_sector_charges_from_labels(self):
        """Sector charges follow from the vacuum labels alone."""
        assert sector_charges("V_EC") == (0.0, 1.0)
        assert sector_charges("D_AB") == (-0.5, 0.5)
        assert sector_charges(SectorLabel.parse("H_ED")) == (-1.0, 0.0)


class TestClassifySector:
    """Tests for classify_sector()."""

    @pytest.mark.parametrize("name", ["H_BC", "V_EC", "D_AB", "D_DA"])
    def test_round_trip(self, params, default_grid, name):
        sector = SectorLabel.parse(name)
        assert classify_sector(seed_for_sector(sector, default_grid, params), params) == sector

    def test_trivial_state_is_unclassifiable(self, params, default_grid):
        s = FieldState.uniform(default_grid, 1.0, 2.0)
        with pytest.raises(UnclassifiableStateError, match="trivial"):
            classify_sector(s, params)

    def test_non_adjacent_vacua_need_several_solitons(self, params, default_grid):
        """B -> E is a diagonal corner pair: at least two solitons."""
        s = _step_state(default_grid, (-1.0, 2.0), (1.0, -2.0))
        with pytest.raises(MultiSolitonError):
            classify_sector(s, params)

    def test_endpoint_off_vacuum(self, params, default_grid):
        s = _step_state(default_grid, (0.3, 0.3), (1.0, 2.0))
        with pytest.raises(UnclassifiableStateError):
            classify_sector(s, params)


class TestAdjacentSectors:
    """Tests for adjacent_sectors()."""

    def test_sixteen_sectors(self):
        sectors = adjacent_sectors()
        names = {s.name for s in sectors}

        assert len(sectors) == 16
        assert len(names) == 16
        assert {"D_AB", "D_CA", "H_BC", "H_ED", "V_DB", "V_CE"} <= names

    def test_family_counts(self):
        families = [s.family for s in adjacent_sectors()]
        assert families.count("D") == 8
        assert families.count("H") == 4
        assert families.count("V") == 4


class TestValidateArray:
    """Tests for validate_array()."""

    def test_allowed_chain(self):
        assert validate_array(["D_DA", "D_AB", "H_BC", "V_CE", "H_ED"])

    def test_single_soliton(self):
        assert validate_array(["V_EC"])

    def test_mismatched_neighbours_forbidden(self):
        """D_DA ends in A but D_BA starts in B."""
        assert not validate_array(["D_DA", "D_BA"])

    def test_non_sector_name_forbidden(self):
        """E -> C is V-type, so H_EC is not a sector."""
        assert not validate_array(["H_EC"])
        assert not validate_array(["D_AB", "X_BC"])

    def test_accepts_labels(self):
        labels = [SectorLabel.parse("D_EA"), SectorLabel.parse("D_AC")]
        assert validate_array(labels)

    def test_empty_array_rejected(self):
        with pytest.raises(InvalidInputError):
            validate_array([])


class TestArrayCharges:
    """Tests for array_charges() and additivity."""

    def test_additivity(self):
        """D_EA + D_AC carries the charges of V_EC."""
        labels = [SectorLabel.parse("D_EA"), SectorLabel.parse("D_AC")]
        assert array_charges(labels) == SectorLabel.parse("V_EC").charges

    def test_matches_built_array(self, params, default_grid):
        labels = [SectorLabel.parse(n) for n in ("D_DA", "D_AB", "H_BC")]
        s = build_array(labels, [-10.0, 0.0, 10.0], default_grid, params)

        assert charges(s, params) == array_charges(labels)
        assert charges(s, params) == (1.0, 1.0)
