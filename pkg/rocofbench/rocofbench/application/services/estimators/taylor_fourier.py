"""
Taylor-Fourier dynamic phasor estimation.

Each component of frequency f_c is modelled as Re{p_c(t) exp(j 2 pi f_c t)}
with a polynomial envelope p_c of order K. Time is centred on the window
midpoint and normalised by the half window for conditioning; envelope
coefficients are converted back to seconds before use. Components beyond
the fundamental are picked greedily from the harmonic grid and from
residual spectral peaks.
"""
from dataclasses import dataclass, field

import numpy as np
from loguru import logger
from scipy import linalg

from rocofbench.application.ports.exceptions.estimation import (
    IllConditionedFit,
)
from rocofbench.application.services.estimators.ipdft import (
    e_ipdft_fit,
    interpolation_delta,
    windowed_spectrum,
    wrap_phase,
)
from rocofbench.application.services.estimators.windows import hann
from rocofbench.domain.entities import EstimatorConfig, PhasorEstimate

_MIN_SEPARATION_BINS = 1.5


@dataclass
class _Fit:
    freqs: list[float]
    coefficients: np.ndarray
    residual: np.ndarray
    condition: float


@dataclass
class TaylorFourierModel:
    """
    Time grid and column builder shared by every fit on one window.
    """
    n: int
    fs: float
    order: int
    weights: np.ndarray
    tau: np.ndarray = field(init=False)
    t: np.ndarray = field(init=False)

    def __post_init__(self):
        half = self.n / 2
        self.tau = (np.arange(self.n) - half) / half
        self.t = self.tau * self.half_window

    @property
    def half_window(self) -> float:
        return self.n / (2 * self.fs)

    def columns(self, freq: float) -> np.ndarray:
        """
        Real columns tau^p cos, tau^p sin for p = 0..order.
        """
        phase = 2 * np.pi * freq * self.t
        cos, sin = np.cos(phase), np.sin(phase)
        blocks = []
        for p in range(self.order + 1):
            power = self.tau ** p
            blocks.extend((power * cos, power * sin))
        return np.column_stack(blocks) * self.weights[:, None]

    def design(self, freqs: list[float]) -> np.ndarray:
        return np.hstack([self.columns(freq) for freq in freqs])


def _solve(design: np.ndarray, target: np.ndarray) -> tuple[np.ndarray, float]:
    solution, _, _, singular = linalg.lstsq(design, target, lapack_driver="gelsd")
    if singular[-1] == 0:
        return solution, np.inf
    return solution, float(singular[0] / singular[-1])


def _fit(model: TaylorFourierModel, target: np.ndarray, freqs: list[float]) -> _Fit:
    design = model.design(freqs)
    coefficients, condition = _solve(design, target)
    return _Fit(
        freqs=list(freqs),
        coefficients=coefficients,
        residual=target - design @ coefficients,
        condition=condition,
    )


def _projection_energy(
        model: TaylorFourierModel,
        residual: np.ndarray,
        freq: float
) -> float:
    columns = model.columns(freq)
    coefficients, _ = _solve(columns, residual)
    return float(np.sum((columns @ coefficients) ** 2))


def _is_separated(freq: float, others: list[float], bin_width: float) -> bool:
    return all(
        abs(freq - other) > _MIN_SEPARATION_BINS * bin_width for other in others
    )


def _interharmonic_candidates(
        residual: np.ndarray,
        model: TaylorFourierModel,
        occupied: list[float],
        limit: int
) -> list[float]:
    """
    Interpolated frequencies of the strongest residual spectral peaks
    away from already occupied frequencies.
    """
    if limit <= 0:
        return []
    spectrum = np.abs(windowed_spectrum(residual))
    bin_width = model.fs / model.n
    inner = np.arange(1, len(spectrum) - 1)
    peaks = inner[
        (spectrum[inner] >= spectrum[inner - 1])
        & (spectrum[inner] > spectrum[inner + 1])
    ]
    found: list[float] = []
    for k in peaks[np.argsort(spectrum[peaks])[::-1]]:
        freq = (k + interpolation_delta(spectrum[k - 1:k + 2])) * bin_width
        if _is_separated(freq, occupied + found, bin_width):
            found.append(float(freq))
        if len(found) == limit:
            break
    return found


def _harmonic_candidates(cfg: EstimatorConfig) -> list[float]:
    """
    Harmonics of the nominal frequency below Nyquist; the polynomial
    envelope absorbs the offset of an off-nominal harmonic.
    """
    nyquist = cfg.fs / 2
    return [
        h * cfg.f_nominal for h in range(2, cfg.harmonic_max + 1)
        if h * cfg.f_nominal < nyquist
    ]


def _greedy_fit(
        model: TaylorFourierModel,
        target: np.ndarray,
        f_pre: float,
        cfg: EstimatorConfig
) -> _Fit:
    fit = _fit(model, target, [f_pre])
    if fit.condition > cfg.condition_limit:
        message = (
            f"Fundamental-only fit condition number {fit.condition:.2e} "
            f"exceeds {cfg.condition_limit:.0e}."
        )
        logger.warning(message)
        raise IllConditionedFit(message)
    energy = float(np.sum(target ** 2))
    if energy == 0:
        return fit
    harmonics = _harmonic_candidates(cfg)
    rejected: list[float] = []
    interharmonics_used = 0
    while len(fit.freqs) < cfg.max_atoms:
        if np.sum(fit.residual ** 2) / energy < cfg.residual_threshold:
            break
        occupied = fit.freqs + harmonics + rejected
        interharmonics = _interharmonic_candidates(
            fit.residual, model, occupied,
            cfg.max_interharmonics - interharmonics_used
        )
        candidates = [
            f for f in harmonics + interharmonics if f not in fit.freqs + rejected
        ]
        if not candidates:
            break
        best = max(
            candidates,
            key=lambda f: _projection_energy(model, fit.residual, f)
        )
        extended = _fit(model, target, fit.freqs + [best])
        if extended.condition > cfg.condition_limit:
            logger.debug(f"Skipping {best:.2f} Hz: fit ill-conditioned")
            rejected.append(best)
            continue
        if best in interharmonics:
            interharmonics_used += 1
        else:
            harmonics.remove(best)
        fit = extended
    return fit


def envelope_coefficients(fit: _Fit, model: TaylorFourierModel) -> np.ndarray:
    """
    Fundamental envelope p_k (seconds based) from the fitted columns.
    """
    block = fit.coefficients[:2 * (model.order + 1)]
    cos_terms, sin_terms = block[0::2], block[1::2]
    scale = model.half_window ** np.arange(model.order + 1)
    return (cos_terms - 1j * sin_terms) / scale


def tfm_estimate(
        window: np.ndarray,
        cfg: EstimatorConfig,
        t_mid: float = 0.0
) -> PhasorEstimate:
    """
    Dynamic phasor estimate at the window midpoint.

    Parameters
    ----------
    window : np.ndarray
        Window samples
    cfg : EstimatorConfig
        Taylor order, dictionary limits and fit guards
    t_mid : float
        Window midpoint timestamp

    Returns
    ----------
    PhasorEstimate
        Amplitude, phase and frequency at the midpoint; rocof_instant
        holds the envelope-derived ROCOF when the order allows it.

    Raises
    ----------
    ConvergenceFailed
        If the frequency pre-estimate fails.
    IllConditionedFit
        If the fundamental-only fit exceeds the condition limit.
    """
    samples = np.asarray(window, dtype=float)
    n = len(samples)
    f_pre = e_ipdft_fit(samples, cfg).freq(cfg.fs, n)
    weights = np.sqrt(hann(n)) if cfg.weighted_fit else np.ones(n)
    model = TaylorFourierModel(n=n, fs=cfg.fs, order=cfg.taylor_order, weights=weights)
    fit = _greedy_fit(model, samples * weights, f_pre, cfg)
    p = envelope_coefficients(fit, model)
    p0 = p[0]
    if p0 == 0:
        freq, rocof = f_pre, np.nan
    else:
        p1 = p[1] if cfg.taylor_order >= 1 else 0j
        freq = f_pre + np.imag(p1 * np.conj(p0)) / abs(p0) ** 2 / (2 * np.pi)
        rocof = np.nan
        if cfg.taylor_order >= 2:
            rocof = np.imag((2 * p[2] * p0 - p1 ** 2) / p0 ** 2) / (2 * np.pi)
    return PhasorEstimate(
        t_mid=t_mid,
        amplitude=float(abs(p0)),
        phase=wrap_phase(float(np.angle(p0))),
        freq=float(freq),
        rocof_instant=float(rocof),
        f_ref=f_pre,
        envelope=tuple(complex(c) for c in p),
    )
