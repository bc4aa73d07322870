"""
Aggregate single-bus swing dynamics.
"""
from dataclasses import replace

from loguru import logger

from rocofbench.application.ports.exceptions.simulation import (
    SimulationConfigError,
)
from rocofbench.domain.grid import GridModel, UflsState

MAX_STEP = 1e-3


def validate_grid(grid: GridModel) -> None:
    """
    Raises
    ----------
    SimulationConfigError
        If inertia, base power or step are not usable, the load
        blocks exceed base power or a restoration or bus tone setting
        is out of range.
    """
    problems = []
    if grid.H <= 0:
        problems.append(f"H must be positive, got {grid.H}")
    if grid.D < 0:
        problems.append(f"D must be non-negative, got {grid.D}")
    if grid.base_power <= 0:
        problems.append(f"base_power must be positive, got {grid.base_power}")
    if not 0 < grid.dt <= MAX_STEP:
        problems.append(f"dt must be in (0, {MAX_STEP}] s, got {grid.dt}")
    if grid.scheduled_load > grid.base_power:
        problems.append(
            f"load blocks sum to {grid.scheduled_load} MW, "
            f"above base power {grid.base_power} MW"
        )
    if grid.t_stop <= grid.t_start:
        problems.append(f"empty horizon [{grid.t_start}, {grid.t_stop}] s")
    if not 0 < grid.f_collapse < grid.f0:
        problems.append(f"collapse frequency {grid.f_collapse} Hz out of range")
    if grid.restoration_delay is not None and not grid.restoration_delay > 0:
        problems.append(
            f"restoration_delay must be positive, got {grid.restoration_delay}"
        )
    for tone in grid.bus_tones:
        if not tone.freq > 0 or not 0 <= tone.amplitude < 1:
            problems.append(f"bus tone {tone} out of range")
    if problems:
        message = "Invalid grid model: " + "; ".join(problems) + "."
        logger.error(message)
        raise SimulationConfigError(message)


def frequency_slope(grid: GridModel, freq: float, imbalance_pu: float) -> float:
    """
    df/dt = f0 / (2H) * (dP - D * df / f0).
    """
    deviation_pu = (freq - grid.f0) / grid.f0
    return grid.f0 / (2 * grid.H) * (imbalance_pu - grid.D * deviation_pu)


def step_dynamics(
        state: UflsState,
        imbalance_pu: float,
        dt: float,
        grid: GridModel
) -> UflsState:
    """
    One explicit Euler step of the swing equation.

    Parameters
    ----------
    state : UflsState
        Current state
    imbalance_pu : float
        (generation - served load) / base_power
    dt : float
        Step in seconds, at most 1 ms
    grid : GridModel
        Nominal frequency, inertia, damping and collapse threshold

    Returns
    ----------
    UflsState
        Advanced state; blackout is latched once frequency falls below
        f_collapse and the frequency is then frozen.

    Raises
    ----------
    SimulationConfigError
        If dt is outside (0, 1 ms].
    """
    if not 0 < dt <= MAX_STEP:
        message = f"Integration step must be in (0, {MAX_STEP}] s, got {dt}."
        logger.error(message)
        raise SimulationConfigError(message)
    if state.blackout:
        return replace(state, t=state.t + dt)
    freq = state.freq + dt * frequency_slope(grid, state.freq, imbalance_pu)
    blackout = freq < grid.f_collapse
    return replace(state, t=state.t + dt, freq=freq, blackout=blackout)
