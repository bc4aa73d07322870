"""
Single-phase PI phase-locked loop.

The quadrature signal is the input delayed by a quarter of a nominal
cycle. The delay line starts filled with the loop's own reference so a
locked start produces no transient.
"""
import math
from dataclasses import dataclass

import numpy as np
from loguru import logger

from rocofbench.application.ports.exceptions.simulation import (
    SimulationConfigError,
)
from rocofbench.domain.grid import PllConfig


@dataclass(frozen=True)
class PllTrack:
    """
    PLL output: frequency in Hz per sample or per reporting block.
    """
    freq: np.ndarray
    loss_of_lock: bool = False
    lock_lost_at: float | None = None


def validate_pll(cfg: PllConfig) -> None:
    if cfg.kp <= 0 or cfg.ki <= 0:
        message = f"PLL gains must be positive, got kp={cfg.kp}, ki={cfg.ki}."
        logger.error(message)
        raise SimulationConfigError(message)
    delay = cfg.fs / (4 * cfg.f0)
    if delay < 1 or abs(delay - round(delay)) > 1e-9:
        message = (
            f"Quarter cycle of {cfg.f0} Hz is not a whole number of "
            f"samples at {cfg.fs} Hz."
        )
        logger.error(message)
        raise SimulationConfigError(message)


class PhaseLockedLoop:
    """
    Stateful PLL processing samples in order.

    Attributes
    ----------
    loss_of_lock : bool
        Latched once the phase error stays above pi / 2 for longer
        than one nominal cycle
    """

    def __init__(self, cfg: PllConfig, initial_phase: float = 0.0, t0: float = 0.0):
        validate_pll(cfg)
        self.cfg = cfg
        self.omega0 = 2 * math.pi * cfg.f0
        self.delay = int(round(cfg.fs / (4 * cfg.f0)))
        self.theta = initial_phase
        self.integral = 0.0
        self.index = 0
        self.t0 = t0
        self.history = [
            math.cos(initial_phase - self.omega0 * (self.delay - k) / cfg.fs)
            for k in range(self.delay)
        ]
        self.unlocked_samples = 0
        self.loss_of_lock = False
        self.lock_lost_at: float | None = None

    def process(self, samples: np.ndarray) -> np.ndarray:
        """
        Track a block of samples.

        Returns
        ----------
        np.ndarray
            Loop frequency in Hz after each sample.
        """
        kp, ki, fs = self.cfg.kp, self.cfg.ki, self.cfg.fs
        limit = int(round(fs / self.cfg.f0))
        output = np.empty(len(samples))
        for n, x in enumerate(np.asarray(samples, dtype=float)):
            x_q = self.history[self.index % self.delay]
            self.history[self.index % self.delay] = x
            cos_t, sin_t = math.cos(self.theta), math.sin(self.theta)
            magnitude = math.hypot(x, x_q)
            error = (x_q * cos_t - x * sin_t) / magnitude if magnitude else 0.0
            self._watch_lock(x, x_q, cos_t, sin_t, limit)
            self.integral += ki * error / fs
            omega = self.omega0 + kp * error + self.integral
            output[n] = omega / (2 * math.pi)
            self.theta = (self.theta + omega / fs) % (2 * math.pi)
            self.index += 1
        return output

    def _watch_lock(self, x, x_q, cos_t, sin_t, limit) -> None:
        phase_error = math.atan2(x_q * cos_t - x * sin_t, x * cos_t + x_q * sin_t)
        if abs(phase_error) > math.pi / 2:
            self.unlocked_samples += 1
        else:
            self.unlocked_samples = 0
        if self.unlocked_samples > limit and not self.loss_of_lock:
            self.loss_of_lock = True
            self.lock_lost_at = self.t0 + self.index / self.cfg.fs
            logger.warning(f"PLL lost lock at {self.lock_lost_at:.4f} s")


def block_average(values: np.ndarray, block: int) -> np.ndarray:
    """
    Mean over consecutive blocks; a trailing partial block is dropped.
    """
    count = len(values) // block
    return np.asarray(values[:count * block]).reshape(count, block).mean(axis=1)


def pll_track(
        samples: np.ndarray,
        cfg: PllConfig,
        reporting_rate: float | None = None,
        initial_phase: float = 0.0
) -> PllTrack:
    """
    Track the frequency of a sampled sinusoid.

    Parameters
    ----------
    samples : np.ndarray
        Input sampled at cfg.fs, phase initial_phase at the first sample
    cfg : PllConfig
        Loop gains, sampling rate and nominal frequency
    reporting_rate : float or None
        Average the loop frequency over reporting intervals; None keeps
        one value per sample
    initial_phase : float
        Starting phase of the loop reference

    Returns
    ----------
    PllTrack
        Frequency stream and loss-of-lock flag.
    """
    loop = PhaseLockedLoop(cfg, initial_phase)
    freq = loop.process(samples)
    if reporting_rate is not None:
        freq = block_average(freq, int(round(cfg.fs / reporting_rate)))
    return PllTrack(
        freq=freq, loss_of_lock=loop.loss_of_lock, lock_lost_at=loop.lock_lost_at
    )
