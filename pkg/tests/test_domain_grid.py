"""Tests for grid entities."""

import math

import numpy as np
import pytest

from rocofbench.domain.enums import (
    MeasurementSource,
    RelayKind,
    ShedEventKind,
)
from rocofbench.domain.grid import (
    PllConfig,
    SheddingEvent,
    UflsResult,
)
from tests.factories import GridModelFactory


class TestGridModel:
    """Tests for GridModel entity."""

    def test_scheduled_load(self):
        """Test the sum of load blocks."""
        grid = GridModelFactory()

        assert grid.scheduled_load == 6000.0
        assert len(grid.outages) == 1

    def test_no_outage(self):
        """Test the factory without an outage."""
        assert GridModelFactory(outage_mw=0).outages == ()


class TestPllConfig:
    """Tests for PllConfig entity."""

    def test_loop_parameters(self):
        """Test natural frequency and damping of the default gains."""
        cfg = PllConfig()

        assert cfg.natural_frequency == pytest.approx(math.sqrt(3200.0))
        assert cfg.damping == pytest.approx(180.0 / (2 * math.sqrt(3200.0)))
        assert cfg.damping > 1


class TestUflsResult:
    """Tests for UflsResult entity."""

    def test_total_shed(self):
        """Test that only shed events count."""
        events = (
            SheddingEvent(1.0, ShedEventKind.OUTAGE, 1500.0),
            SheddingEvent(1.2, ShedEventKind.SHED, 750.0),
            SheddingEvent(1.5, ShedEventKind.SHED, 250.0),
        )
        result = UflsResult(
            source=MeasurementSource.PLL,
            scheme=RelayKind.FREQUENCY_STAGED,
            t=np.zeros(1), freq=np.zeros(1), served_mw=np.zeros(1),
            shed_mw=np.zeros(1), measured=np.zeros(1),
            events=events, blackout=False, blackout_time=None, eens_mwh=0.0,
        )

        assert result.total_shed_mw == 1000.0
