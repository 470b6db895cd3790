"""
Tests for the relaxation kernel and driver.
"""

import numpy as np
import pytest

from soliton_lab.errors import PreconditionError
from soliton_lab.jobs.relaxer import RelaxResult, relax, sweep
from soliton_lab.jobs.relaxer.kernels import GUARD_PHI, _link_change, sweep_kernel
from soliton_lab.jobs.relaxer.relax import TRACE_COLUMNS, UNGUARDED, core_guard
from soliton_lab.models import RelaxConfig, SectorLabel
from soliton_lab.physics.charges import classify_sector
from soliton_lab.physics.lattice import FieldState, discrete_energy, total_energy
from soliton_lab.physics.model import grad_potential
from soliton_lab.physics.seeds import boost, seed_for_sector, seed_H, seed_V


class TestSweepKernel:
    """Tests for the compiled accept/reject kernel."""

    @staticmethod
    def _energy_gradient(s, i, params):
        """Derivative of the discrete energy with respect to (phi[i], psi[i])."""
        eps = s.grid.eps
        dv_dphi, dv_dpsi = grad_potential(s.phi[i], s.psi[i], params)
        link_phi = (2.0 * s.phi[i] - s.phi[i - 1] - s.phi[i + 1]) / eps
        link_psi = (2.0 * s.psi[i] - s.psi[i - 1] - s.psi[i + 1]) / eps
        return np.array([eps * dv_dphi + link_phi, eps * dv_dpsi + link_psi])

    def test_local_change_matches_full_recompute(self, params, coarse_grid):
        """Downhill moves are kept with the exact energy change; uphill moves are refused."""
        rng = np.random.default_rng(3)
        s = seed_H(coarse_grid, p=params)
        core = np.flatnonzero(np.abs(coarse_grid.x) < 0.5)

        for k in range(100):
            i = int(rng.choice(core))
            g = self._energy_gradient(s, i, params)
            direction = -1.0 if k % 2 == 0 else 1.0
            proposal = (direction * 1e-4 * g / np.linalg.norm(g)).reshape(2, 1)
            before = discrete_energy(s, params)

            accepted, delta = sweep_kernel(
                s.phi, s.psi, np.array([i]), proposal, coarse_grid.eps, params.phi0, params.psi0
            )

            if direction < 0:
                assert accepted == 1
                assert delta < 0
                assert discrete_energy(s, params) - before == pytest.approx(delta, abs=1e-12)
            else:
                assert accepted == 0
                assert delta == 0.0
                assert discrete_energy(s, params) == before

    @pytest.mark.parametrize("sector", ["H_BC", "V_DB", "V_EC", "D_AC"])
    def test_zero_proposals_are_never_accepted(self, params, default_grid, sector):
        """A null move leaves the energy unchanged, so it must not pass the strict test."""
        s = seed_for_sector(SectorLabel.parse(sector), default_grid, params)
        interior = np.arange(1, default_grid.n - 1)
        proposals = np.zeros((2, interior.size))

        accepted, delta = sweep_kernel(
            s.phi, s.psi, interior, proposals, default_grid.eps, params.phi0, params.psi0
        )

        assert accepted == 0
        assert delta == 0.0

    def test_link_change_vanishes_for_a_null_move(self):
        assert _link_change(-1.3, 0.7071067811865476, 0.7071067811865476, 2.1) == 0.0

    def test_guard_refuses_downhill_moves_below_the_floor(self, params, coarse_grid):
        s = seed_V(coarse_grid, phi_branch=-1, p=params)
        i = coarse_grid.n // 2
        s.phi[i - 3 : i + 4] = -0.2
        # Pulling phi towards zero at the core lowers the potential
        proposal = np.array([[0.01], [0.0]])
        args = (s.phi, s.psi, np.array([i]), proposal, coarse_grid.eps, params.phi0)

        accepted, _ = sweep_kernel(*args, params.psi0, GUARD_PHI, -1.0, 0.195)
        assert accepted == 0
        assert s.phi[i] == -0.2

        accepted, _ = sweep_kernel(*args, params.psi0)
        assert accepted == 1
        assert s.phi[i] == pytest.approx(-0.19)

    def test_zero_amplitude_accepts_nothing(self, params, coarse_grid):
        s = seed_H(coarse_grid, p=params)
        phi_before = s.phi.copy()

        accepted = sweep(s, 0.0, np.random.default_rng(0), params)

        assert accepted == 0
        np.testing.assert_array_equal(s.phi, phi_before)

    def test_sweep_never_touches_endpoints(self, params, coarse_grid):
        s = seed_H(coarse_grid, p=params)
        ends = s.endpoints()

        for _ in range(20):
            sweep(s, 0.1, np.random.default_rng(1), params)

        assert s.endpoints() == ends


class TestRelax:
    """Tests for relax()."""

    def test_energy_decreases_and_sector_is_kept(self, params, coarse_grid, fast_relax_config):
        seed = seed_H(coarse_grid, p=params)
        result = relax(seed, fast_relax_config, params)

        assert isinstance(result, RelaxResult)
        assert discrete_energy(result.state, params) < discrete_energy(seed, params)
        assert classify_sector(result.state, params).name == "H_BC"
        assert result.state.endpoints() == seed.endpoints()
        assert result.energy == pytest.approx(total_energy(result.state, params))

    def test_seed_is_not_modified(self, params, coarse_grid, fast_relax_config):
        seed = seed_H(coarse_grid, p=params)
        psi_before = seed.psi.copy()

        relax(seed, fast_relax_config, params)

        np.testing.assert_array_equal(seed.psi, psi_before)

    def test_trace_is_monotone(self, params, coarse_grid, fast_relax_config):
        result = relax(seed_H(coarse_grid, p=params), fast_relax_config, params)
        energies = result.trace["total_energy"].to_numpy()

        assert list(result.trace.columns) == TRACE_COLUMNS
        assert len(result.trace) == result.sweeps + 1
        assert np.all(np.diff(energies) <= 0)

    def test_trace_matches_discrete_energy(self, params, coarse_grid, fast_relax_config):
        """Accumulated deltas agree with a direct evaluation at the end."""
        result = relax(seed_H(coarse_grid, p=params), fast_relax_config, params)
        final = result.trace["total_energy"].iloc[-1]

        assert final == pytest.approx(discrete_energy(result.state, params), abs=1e-8)

    def test_deterministic_for_fixed_seed(self, params, coarse_grid):
        cfg = RelaxConfig(max_sweeps=300, rng_seed=7)
        seed = seed_for_sector(SectorLabel.parse("D_AC"), coarse_grid, params)

        first = relax(seed, cfg, params)
        second = relax(seed, cfg, params)

        np.testing.assert_array_equal(first.state.phi, second.state.phi)
        np.testing.assert_array_equal(first.state.psi, second.state.psi)

    def test_different_rng_seeds_differ(self, params, coarse_grid):
        seed = seed_for_sector(SectorLabel.parse("D_AC"), coarse_grid, params)

        first = relax(seed, RelaxConfig(max_sweeps=50, rng_seed=1), params)
        second = relax(seed, RelaxConfig(max_sweeps=50, rng_seed=2), params)

        assert not np.array_equal(first.state.phi, second.state.phi)

    def test_budget_exhaustion_is_reported(self, params, coarse_grid):
        """Running out of sweeps is not an error; the result says so."""
        result = relax(seed_H(coarse_grid, p=params), RelaxConfig(max_sweeps=5), params)

        assert result.converged is False
        assert result.reason == "max_sweeps"
        assert result.sweeps == 5

    def test_vacuum_converges_immediately_by_amplitude(self, params, coarse_grid):
        """Nothing lowers the energy of a vacuum; the amplitude anneals away."""
        cfg = RelaxConfig(step_amplitude=1e-3, min_amplitude=1e-6, max_sweeps=100, window=1000)
        result = relax(FieldState.uniform(coarse_grid, 1.0, 2.0), cfg, params)

        assert result.converged
        assert result.reason == "amplitude"
        assert result.sweeps == 10

    def test_window_criterion(self, params, coarse_grid):
        cfg = RelaxConfig(max_sweeps=50_000, window=20, tol=1e-4)
        result = relax(seed_H(coarse_grid, p=params), cfg, params)

        assert result.converged
        assert result.reason == "window"

    def test_moving_seed_rejected(self, params, coarse_grid):
        with pytest.raises(PreconditionError, match="static"):
            relax(boost(seed_H(coarse_grid, p=params), 0.2), RelaxConfig(), params)

    def test_off_vacuum_endpoint_rejected(self, params, coarse_grid):
        seed = seed_H(coarse_grid, p=params)
        seed.phi[0] = -0.9
        with pytest.raises(PreconditionError, match="not a vacuum"):
            relax(seed, RelaxConfig(), params)


class TestCoreGuard:
    """Tests for the V-sector guard used by relax()."""

    @pytest.mark.parametrize("sector", ["D_AB", "D_CA", "H_BC", "H_ED"])
    def test_other_sectors_are_unguarded(self, params, coarse_grid, sector):
        seed = seed_for_sector(SectorLabel.parse(sector), coarse_grid, params)
        assert core_guard(seed, RelaxConfig(), params) == UNGUARDED

    @pytest.mark.parametrize("sector,sign", [("V_DB", -1.0), ("V_EC", 1.0), ("V_BD", -1.0)])
    def test_v_sectors_keep_the_sign_of_phi(self, params, coarse_grid, sector, sign):
        seed = seed_for_sector(SectorLabel.parse(sector), coarse_grid, params)
        assert core_guard(seed, RelaxConfig(v_core_floor=0.2), params) == (GUARD_PHI, sign, 0.2)

    def test_zero_floor_disables_the_guard(self, params, coarse_grid):
        seed = seed_for_sector(SectorLabel.parse("V_DB"), coarse_grid, params)
        assert core_guard(seed, RelaxConfig(v_core_floor=0.0), params) == UNGUARDED

    def test_guarded_v_keeps_phi_off_the_central_vacuum(self, params, coarse_grid):
        seed = seed_for_sector(SectorLabel.parse("V_DB"), coarse_grid, params)
        cfg = RelaxConfig(max_sweeps=3000, window=200, tol=1e-9, v_core_floor=0.2)

        guarded = relax(seed, cfg, params)
        free = relax(seed, cfg.model_copy(update={"v_core_floor": 0.0}), params)

        assert np.min(-guarded.state.phi) >= 0.2 - 1e-12
        assert np.min(-free.state.phi) < 0.2
        assert classify_sector(guarded.state, params).name == "V_DB"
