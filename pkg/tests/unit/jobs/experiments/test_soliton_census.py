"""
Tests for the soliton census: stability classification, binding energy and the row pipeline.
"""

from unittest.mock import patch

import pytest

from soliton_lab.errors import InvalidInputError
from soliton_lab.jobs.experiments import (
    CENSUS_SECTORS,
    binding_energy,
    census,
    census_row,
    classify_stability,
)
from soliton_lab.jobs.experiments.soliton_census import best_split
from soliton_lab.models import CensusRow, EvolveConfig, RelaxConfig, SectorLabel

# Reference masses at (phi0, psi0) = (1, 2)
REFERENCE_MASSES = {
    "D_AB": 2.858,
    "D_AC": 2.858,
    "D_DA": 2.858,
    "D_EA": 2.858,
    "H_BC": 3.594,
    "V_EC": 6.383,
    "H_DE": 3.594,
    "V_DB": 6.383,
}


def _rows(masses=REFERENCE_MASSES):
    rows = []
    for name, mass in masses.items():
        sector = SectorLabel.parse(name)
        qh, qv = sector.charges
        rows.append(CensusRow(sector=sector, mass=mass, QH=qh, QV=qv))
    return rows


class TestClassifyStability:
    """Tests for classify_stability()."""

    def test_reference_table(self):
        """V-type solitons are metastable; D and H are stable."""
        rows = {row.sector.name: row for row in classify_stability(_rows())}

        for name in ("D_AB", "D_AC", "D_DA", "D_EA", "H_BC", "H_DE"):
            assert rows[name].stability == "stable", name
            assert rows[name].decay_mode is None

        assert rows["V_EC"].stability == "metastable"
        assert rows["V_EC"].decay_mode_name == "V_EC->D_EA+D_AC"
        assert rows["V_DB"].stability == "metastable"
        assert rows["V_DB"].decay_mode_name == "V_DB->D_DA+D_AB"

    def test_h_is_stable_because_split_is_heavier(self):
        """2 * 2.858 > 3.594, so H has no allowed decay."""
        split = best_split(SectorLabel.parse("H_BC"), REFERENCE_MASSES)

        assert split is not None
        assert split[1] > REFERENCE_MASSES["H_BC"]

    def test_missing_products_use_parity_mirrors(self):
        """D_BA is not in the table but its mirror D_AB is."""
        split = best_split(SectorLabel.parse("H_BC"), REFERENCE_MASSES)
        first, second = split[0]

        assert (first.name, second.name) == ("D_BA", "D_AC")

    def test_no_split_without_masses(self):
        assert best_split(SectorLabel.parse("V_EC"), {"V_EC": 6.383}) is None

    def test_rows_keep_order(self):
        rows = classify_stability(_rows())
        assert [row.sector.name for row in rows] == list(REFERENCE_MASSES)

    def test_reclassification_clears_stale_modes(self):
        """A row marked metastable becomes stable once its split is heavier."""
        heavy_products = {**REFERENCE_MASSES, "D_EA": 5.0, "D_AC": 5.0}
        first = {row.sector.name: row for row in classify_stability(_rows())}
        rows = [
            first[name].model_copy(update={"mass": mass})
            for name, mass in heavy_products.items()
        ]

        reclassified = {row.sector.name: row for row in classify_stability(rows)}

        assert reclassified["V_EC"].stability == "stable"
        assert reclassified["V_EC"].decay_mode is None


class TestBindingEnergy:
    """Tests for binding_energy()."""

    def test_reference_value(self):
        """M(V) - 2 M(D) = 6.383 - 5.716 = 0.667."""
        assert binding_energy(_rows(), "V_EC") == pytest.approx(0.667, abs=1e-9)
        assert binding_energy(_rows(), SectorLabel.parse("V_DB")) == pytest.approx(0.667)

    def test_d_parent_rejected(self):
        with pytest.raises(InvalidInputError):
            binding_energy(_rows(), "D_AB")

    def test_missing_parent_rejected(self):
        with pytest.raises(InvalidInputError, match="not in the census"):
            binding_energy(_rows(), "V_CE")

    def test_missing_product_rejected(self):
        masses = {"V_EC": 6.383, "D_EA": 2.858}
        with pytest.raises(InvalidInputError, match="D_AC"):
            binding_energy(_rows(masses), "V_EC")


class TestCensusRow:
    """Tests for census_row() on a coarse grid."""

    def test_row_carries_exact_charges(self, params, coarse_grid, fast_relax_config):
        row = census_row(SectorLabel.parse("D_AB"), coarse_grid, fast_relax_config, None, params)

        assert (row.QH, row.QV) == (-0.5, 0.5)
        assert row.mass > 0
        assert row.energy_drift is None
        assert row.stability == "stable"

    def test_stability_run_fills_drifts(self, params, coarse_grid, fast_relax_config):
        row = census_row(
            SectorLabel.parse("H_BC"),
            coarse_grid,
            fast_relax_config,
            EvolveConfig(t_end=2.0, snapshot_every=20),
            params,
        )

        assert row.energy_drift is not None
        assert row.energy_drift < 2e-2
        assert row.center_drift is not None


class TestCensus:
    """Tests for census()."""

    def test_default_sectors(self):
        assert CENSUS_SECTORS == ("D_AB", "D_AC", "D_DA", "D_EA", "H_BC", "V_EC", "H_DE", "V_DB")

    def test_rows_follow_requested_order(self, params, coarse_grid):
        cfg = RelaxConfig(max_sweeps=200)
        rows = census(params, coarse_grid, cfg, None, sectors=("V_EC", "D_EA", "D_AC"))

        assert [row.sector.name for row in rows] == ["V_EC", "D_EA", "D_AC"]
        assert [(row.QH, row.QV) for row in rows] == [(0.0, 1.0), (-0.5, 0.5), (0.5, 0.5)]

    def test_rows_are_classified(self, params, coarse_grid):
        """census() hands the finished rows to classify_stability()."""
        with patch(
            "soliton_lab.jobs.experiments.soliton_census.classify_stability",
            side_effect=lambda rows: rows,
        ) as mock_classify:
            census(params, coarse_grid, RelaxConfig(max_sweeps=10), None, sectors=("D_AB",))

        mock_classify.assert_called_once()
