"""Reflected-waveform synthesis for a column-coded surface."""

from collections.abc import Sequence

import numpy as np

from ..codes import TimeCode
from ..errors import ValidationError
from ..logging import get_logger
from .config import LinkConfig

logger = get_logger("linksim.waveform")


def reflection_levels(codes: Sequence[TimeCode], cfg: LinkConfig) -> np.ndarray:
    """Per-bit reflection coefficients of a column's code stream.

    Binary states map through (Γ_off, Γ_on); ternary states are used as
    reflection coefficients directly.
    """
    values = np.concatenate([c.values for c in codes])
    if codes[0].alphabet.name == "binary":
        return cfg.gamma_off + (cfg.gamma_on - cfg.gamma_off) * values
    return values


def column_gain(cfg: LinkConfig) -> np.ndarray:
    """Complex gain of every column toward the receiver.

    Includes the spatial phase exp(−j2π·d·k·sinθ), the element gain (rows
    and optional cosine factor) and the fixed path gain.
    """
    geometry = cfg.array_geometry
    spatial = geometry.spatial_phasors(cfg.rx_angle)
    return geometry.element_gain(cfg.rx_angle) * cfg.path_gain.to_complex() * spatial


def synthesize_rx_waveform(
    schedule: Sequence[Sequence[TimeCode]], cfg: LinkConfig
) -> np.ndarray:
    """Complex baseband samples seen by the receiver.

    Args:
        schedule: one code stream per column, ``schedule[k][i]`` being the
            code column k plays during slot i
        cfg: link configuration (timing, states, geometry, angle)

    Returns:
        r[i] = Σ_k g_k·Γ_k(t_i)·exp(j2π·f_offset·t_i) with t_i = i/fs
    """
    geometry = cfg.array_geometry
    if len(schedule) != geometry.num_columns:
        raise ValidationError(
            f"Schedule has {len(schedule)} columns, geometry has {geometry.num_columns}",
            subcategory="LEN",
        )
    slots = {len(stream) for stream in schedule}
    if len(slots) != 1 or 0 in slots:
        raise ValidationError(
            "All column schedules must be non-empty and equally long", subcategory="LEN"
        )
    for stream in schedule:
        for code in stream:
            if code.length != cfg.L or not np.isclose(
                code.bit_duration, cfg.tau, rtol=1e-12, atol=0
            ):
                raise ValidationError(
                    f"Code with L={code.length}, tau={code.bit_duration} does not match "
                    f"the link timing L={cfg.L}, tau={cfg.tau}",
                    subcategory="LEN",
                )

    levels = np.stack([reflection_levels(stream, cfg) for stream in schedule])
    per_bit = column_gain(cfg) @ levels
    baseband = np.repeat(per_bit, cfg.samples_per_bit)
    t = np.arange(baseband.size) / cfg.sample_rate
    logger.debug(
        f"Synthesized {baseband.size} samples ({levels.shape[1]} bits, "
        f"{geometry.num_columns} columns, rx_angle={cfg.rx_angle}°)"
    )
    return baseband * np.exp(2j * np.pi * cfg.f_offset * t)
