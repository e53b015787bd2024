"""Propagation channel: identity, AWGN and tapped-delay-line multipath."""

import math

import numpy as np
from scipy import signal

from ..errors import ValidationError
from ..logging import get_logger
from .config import LinkConfig

logger = get_logger("linksim.channel")


def noise_variance(cfg: LinkConfig, reference_amplitude: float) -> float:
    """Per-sample complex noise variance for the configured Es/N0.

    The symbol correlator averages W = reps·L·τ·fs samples, so a per-sample
    variance σ² leaves σ²/W on each decision statistic:
    σ² = W·A²/10^(Es/N0 / 10).
    """
    esn0_db = cfg.channel.esn0_db
    if esn0_db is None or not math.isfinite(esn0_db):
        return 0.0
    return cfg.window_samples * reference_amplitude**2 / 10 ** (esn0_db / 10)


def multipath_filter(cfg: LinkConfig) -> np.ndarray:
    """FIR impulse response of the configured taps (delays rounded to samples)."""
    taps = cfg.resolved_taps()
    delays = [int(round(delay * cfg.sample_rate)) for _, delay in taps]
    response = np.zeros(max(delays) + 1, dtype=complex)
    for (gain, _), delay in zip(taps, delays, strict=True):
        response[delay] += gain
    return response


def apply_channel(
    samples: np.ndarray,
    cfg: LinkConfig,
    rng: np.random.Generator | None = None,
    reference_amplitude: float | None = None,
    noise_power: float | None = None,
) -> np.ndarray:
    """Pass samples through the configured channel.

    Args:
        samples: complex input stream
        cfg: link configuration; ``cfg.channel`` selects the model
        rng: noise generator (default: seeded from ``cfg.seed``)
        reference_amplitude: symbol amplitude Es/N0 refers to; the RMS of
            the input when omitted
        noise_power: explicit per-sample noise variance, overriding Es/N0

    Raises:
        ValidationError: on a negative noise power
    """
    kind = cfg.channel.kind
    output = np.array(samples, dtype=complex, copy=True)

    if kind in ("multipath", "office"):
        output = signal.lfilter(multipath_filter(cfg), [1.0], output)

    if noise_power is None:
        if reference_amplitude is None:
            reference_amplitude = float(np.sqrt(np.mean(np.abs(samples) ** 2)))
        variance = noise_variance(cfg, reference_amplitude)
    else:
        variance = noise_power
    if variance < 0 or math.isnan(variance):
        raise ValidationError(
            f"Noise power must be non-negative (got {variance})", subcategory="RNG"
        )
    if variance == 0 or kind == "ideal":
        return output

    generator = rng if rng is not None else np.random.default_rng(cfg.seed)
    scale = math.sqrt(variance / 2)
    noise = scale * (
        generator.standard_normal(output.size) + 1j * generator.standard_normal(output.size)
    )
    logger.debug(f"Added AWGN with per-sample variance {variance:.6g} ({kind} channel)")
    return output + noise
