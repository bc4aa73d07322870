"""Tests for the swing dynamics."""

import math

import pytest

from rocofbench.application.ports.exceptions.simulation import (
    SimulationConfigError,
)
from rocofbench.application.services.uflsim.dynamics import (
    frequency_slope,
    step_dynamics,
    validate_grid,
)
from rocofbench.domain.grid import LoadBlock, UflsState
from tests.factories import GridModelFactory


@pytest.fixture
def grid():
    """Create the short-horizon grid."""
    return GridModelFactory()


class TestValidateGrid:
    """Tests for validate_grid."""

    def test_valid(self, grid):
        """Test that the factory grid is accepted."""
        validate_grid(grid)

    @pytest.mark.parametrize("overrides", [
        {"H": 0.0},
        {"D": -1.0},
        {"base_power": 0.0},
        {"dt": 2e-3},
        {"t_stop": 0.0},
        {"f_collapse": 51.0},
        {"load_blocks": (LoadBlock(7000.0, 0),)},
    ])
    def test_invalid(self, overrides):
        """Test each rejected setting."""
        with pytest.raises(SimulationConfigError):
            validate_grid(GridModelFactory(**overrides))


class TestFrequencySlope:
    """Tests for frequency_slope."""

    def test_outage_slope(self, grid):
        """Test the initial ROCOF of a quarter-base deficit."""
        assert frequency_slope(grid, 50.0, -0.25) == pytest.approx(-50 / 6 * 0.25)

    def test_damping(self, grid):
        """Test that damping opposes the deviation."""
        assert frequency_slope(grid, 49.0, 0.0) == pytest.approx(50 / 6 * 0.02)


class TestStepDynamics:
    """Tests for step_dynamics."""

    def _state(self, freq=50.0):
        return UflsState(t=0.0, freq=freq, generation_mw=6000.0, served_mw=6000.0)

    def test_matches_analytic_response(self, grid):
        """Test Euler integration against the first-order solution."""
        state = self._state()
        for _ in range(4000):
            state = step_dynamics(state, -0.05, grid.dt, grid)

        expected = 50.0 - 2.5 * (1 - math.exp(-state.t / 6.0))
        assert state.t == pytest.approx(2.0)
        assert state.freq == pytest.approx(expected, abs=1e-3)
        assert not state.blackout

    def test_blackout_latches(self, grid):
        """Test that collapse is latched and freezes frequency."""
        state = self._state(47.501)
        state = step_dynamics(state, -0.5, 1e-3, grid)
        assert state.blackout
        frozen = state.freq

        state = step_dynamics(state, 0.5, 1e-3, grid)

        assert state.blackout
        assert state.freq == frozen
        assert state.t == pytest.approx(2e-3)

    @pytest.mark.parametrize("dt", [0.0, 1.5e-3])
    def test_invalid_step(self, grid, dt):
        """Test integration steps outside (0, 1 ms]."""
        with pytest.raises(SimulationConfigError):
            step_dynamics(self._state(), 0.0, dt, grid)
