"""End-to-end simulation of a space-time coded surface radio link."""

from .channel import apply_channel
from .config import LinkConfig, fast_profile, full_profile, load_link_config
from .link import build_codebook, run_link
from .receiver import RxReport, demodulate, spectrum_estimate
from .sweep import SerPoint, SweepPoint, angular_sweep, ser_curve, sweep_peak
from .waveform import synthesize_rx_waveform

__all__ = [
    "LinkConfig",
    "RxReport",
    "SerPoint",
    "SweepPoint",
    "angular_sweep",
    "apply_channel",
    "build_codebook",
    "demodulate",
    "fast_profile",
    "full_profile",
    "load_link_config",
    "run_link",
    "ser_curve",
    "spectrum_estimate",
    "sweep_peak",
    "synthesize_rx_waveform",
]
