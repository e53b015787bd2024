"""Receiver: harmonic filtering, pilot correction, decisions and metrics.

Each symbol window of reps·L·τ seconds is correlated against the tone at
f_offset + n/(L·τ) (one DFT bin, referenced to global time), a common
complex gain is estimated from the leading pilot symbols and removed, and
each statistic is decided to the nearest codebook coefficient.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
from scipy import signal

from ..array import DB_FLOOR
from ..codebook import Codebook
from ..errors import PilotUnusableError, SignalError, ValidationError
from ..logging import get_logger
from ..utils.common import write_csv, write_json
from .config import LinkConfig

logger = get_logger("linksim.receiver")

PILOT_SYMBOL = 0
# Pilot gains this small relative to the coherent reference are treated as nulls.
PILOT_FLOOR = 1e-12


def _power_db(value: "float | np.ndarray") -> "float | np.ndarray":
    with np.errstate(divide="ignore"):
        return np.maximum(10 * np.log10(value), DB_FLOOR)


@dataclass(frozen=True)
class Psd:
    """Two-sided power spectrum, frequencies ascending."""

    freqs_hz: np.ndarray
    power_db: np.ndarray

    def bin_index(self, freq_hz: float) -> int:
        return int(np.argmin(np.abs(self.freqs_hz - freq_hz)))

    def power_at(self, freq_hz: float) -> float:
        """Power (dB) in the bin nearest ``freq_hz``."""
        return float(self.power_db[self.bin_index(freq_hz)])

    @property
    def resolution_hz(self) -> float:
        return float(self.freqs_hz[1] - self.freqs_hz[0])


def spectrum_estimate(
    samples: np.ndarray, sample_rate: float, period: float | None = None
) -> Psd:
    """Hann-windowed periodogram of a complex record.

    With ``period`` (the code period T) the record must hold at least one
    period and is zero-padded as needed so the bin spacing is at most
    1/(3T), which resolves adjacent harmonics.

    Raises:
        SignalError: on a record shorter than one period (or than 2 samples)
    """
    x = np.asarray(samples, dtype=complex)
    nfft = x.size
    if period is not None:
        needed = period * sample_rate
        if x.size < needed - 1e-9:
            raise SignalError(
                f"Record of {x.size} samples is shorter than one code period "
                f"({needed:.6g} samples)",
                subcategory="SHRT",
            )
        nfft = max(x.size, math.ceil(3 * needed - 1e-9))
    if x.size < 2:
        raise SignalError("Record too short for a spectrum", subcategory="SHRT")

    freqs, power = signal.periodogram(
        x,
        fs=sample_rate,
        window="hann",
        nfft=nfft,
        detrend=False,
        return_onesided=False,
        scaling="spectrum",
    )
    return Psd(np.fft.fftshift(freqs), _power_db(np.fft.fftshift(power)))


def harmonic_correlations(samples: np.ndarray, cfg: LinkConfig, harmonic: int) -> np.ndarray:
    """Single-bin correlation of every symbol window at f_offset + n/T.

    Raises:
        SignalError: when the record is not a whole number of windows
    """
    window = cfg.window_samples
    x = np.asarray(samples, dtype=complex)
    if x.size == 0 or x.size % window:
        raise SignalError(
            f"Record of {x.size} samples is not a whole number of symbol windows "
            f"({window} samples each)",
            subcategory="WIN",
        )
    t = np.arange(x.size) / cfg.sample_rate
    tone = np.exp(-2j * np.pi * (cfg.f_offset + harmonic / cfg.period) * t)
    return np.mean((x * tone).reshape(-1, window), axis=1)


def reference_gain(cfg: LinkConfig) -> float:
    """Coherent amplitude gain of the whole surface toward its beam peak."""
    if cfg.modulation.alphabet == "binary":
        swing = abs(cfg.gamma_on - cfg.gamma_off)
    else:
        swing = 1.0
    geometry = cfg.array_geometry
    return geometry.num_columns * geometry.rows * swing * abs(cfg.path_gain.to_complex())


@dataclass(frozen=True)
class RxReport:
    """Receiver output for one link run.

    ``constellation`` holds the pilot-corrected decision statistics of the
    data symbols (pilots excluded), aligned with ``decisions`` and ``truth``.
    """

    spectrum: Psd
    constellation: np.ndarray
    decisions: np.ndarray
    truth: np.ndarray
    evm_pct: float
    ser: float
    ring_amplitude: float
    pilot_gain: complex
    post_filter_snr_db: float | None
    first_harmonic_power_db: float

    @property
    def symbol_errors(self) -> int:
        return int(np.count_nonzero(self.decisions != self.truth))

    def to_dict(self) -> dict[str, Any]:
        return {
            "evm_pct": float(self.evm_pct),
            "ser": float(self.ser),
            "symbols": int(self.truth.size),
            "symbol_errors": self.symbol_errors,
            "ring_amplitude": float(self.ring_amplitude),
            "pilot_gain": {"re": float(self.pilot_gain.real), "im": float(self.pilot_gain.imag)},
            "post_filter_snr_db": (
                None if self.post_filter_snr_db is None else float(self.post_filter_snr_db)
            ),
            "first_harmonic_power_db": float(self.first_harmonic_power_db),
            "decisions": self.decisions.tolist(),
        }

    def write(self, out_dir: str | Path) -> list[Path]:
        """Write ``report.json``, ``spectrum.csv`` and ``constellation.csv``."""
        target = Path(out_dir)
        return [
            write_json(target / "report.json", self.to_dict()),
            write_csv(
                target / "spectrum.csv",
                ("freq_hz", "power_db"),
                zip(
                    self.spectrum.freqs_hz.tolist(),
                    self.spectrum.power_db.tolist(),
                    strict=True,
                ),
            ),
            write_csv(
                target / "constellation.csv",
                ("symbol_index", "re", "im", "decided", "truth"),
                zip(
                    range(self.truth.size),
                    self.constellation.real.tolist(),
                    self.constellation.imag.tolist(),
                    self.decisions.tolist(),
                    self.truth.tolist(),
                    strict=True,
                ),
            ),
        ]


def estimate_pilot_gain(
    statistics: np.ndarray, reference: complex, cfg: LinkConfig, ring: float
) -> complex:
    """Least-squares common gain Σ d·conj(ref) / Σ|ref|² over the pilots.

    Raises:
        PilotUnusableError: when the gain vanishes against the coherent reference
    """
    pilots = statistics[: cfg.pilot_count]
    gain = complex(np.sum(pilots * np.conj(reference)) / (pilots.size * abs(reference) ** 2))
    if abs(gain) <= PILOT_FLOOR * reference_gain(cfg):
        raise PilotUnusableError(
            f"pilot unusable: estimated gain {abs(gain):.3g} carries no energy "
            f"(rx_angle={cfg.rx_angle}°)",
            rx_angle=cfg.rx_angle,
            ring_amplitude=ring,
        )
    return gain


def demodulate(
    samples: np.ndarray, cfg: LinkConfig, book: Codebook, transmitted: "np.ndarray | list[int]"
) -> RxReport:
    """Recover the data symbols of a received record.

    Args:
        samples: received stream holding ``cfg.pilot_count`` pilot windows
            followed by one window per transmitted data symbol
        cfg: link configuration shared with the transmitter
        book: codebook in use
        transmitted: data symbol indices actually sent (for SER and EVM)
    """
    truth = np.asarray(transmitted, dtype=int)
    if truth.size == 0:
        raise ValidationError("No data symbols to demodulate", subcategory="LEN")
    windows = len(samples) // cfg.window_samples if cfg.window_samples else 0
    statistics = harmonic_correlations(samples, cfg, book.scheme.harmonic)
    if windows != cfg.pilot_count + truth.size:
        raise SignalError(
            f"Record holds {windows} symbol windows, expected {cfg.pilot_count} pilots "
            f"+ {truth.size} data symbols",
            subcategory="WIN",
        )

    coefficients = book.coefficients
    ring = book.ring_amplitude
    gain = estimate_pilot_gain(statistics, coefficients[PILOT_SYMBOL], cfg, ring)

    corrected = statistics[cfg.pilot_count :] / gain
    distances = np.abs(corrected[:, None] - coefficients[None, :])
    decisions = np.argmin(distances, axis=1)
    error = corrected - coefficients[truth]
    mse = float(np.mean(np.abs(error) ** 2))
    snr_db = None if mse == 0 else float(10 * np.log10(ring**2 / mse))

    report = RxReport(
        spectrum=spectrum_estimate(samples, cfg.sample_rate, cfg.period),
        constellation=corrected,
        decisions=decisions,
        truth=truth,
        evm_pct=100 * math.sqrt(mse) / ring,
        ser=float(np.mean(decisions != truth)),
        ring_amplitude=ring,
        pilot_gain=gain,
        post_filter_snr_db=snr_db,
        first_harmonic_power_db=float(_power_db(np.mean(np.abs(statistics) ** 2))),
    )
    logger.debug(
        f"Demodulated {truth.size} symbols: SER={report.ser:.4g}, EVM={report.evm_pct:.3g}%"
    )
    return report
