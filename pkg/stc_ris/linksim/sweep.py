"""Angular sweeps and Monte Carlo SER curves."""

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..array import SteeringPlan, to_db
from ..codebook import Codebook
from ..config import get_config
from ..decorators import toolkit_operation
from ..errors import PilotUnusableError, ValidationError
from ..logging import get_logger
from .channel import apply_channel
from .config import LinkConfig
from .link import column_schedule, data_symbols, make_streams, reference_amplitude, run_link
from .receiver import RxReport, demodulate, harmonic_correlations
from .theory import psk_ser
from .waveform import synthesize_rx_waveform

logger = get_logger("linksim.sweep")

# Receiver positions P1..P10 when no angle list is given.
DEFAULT_SWEEP_ANGLES = tuple(float(a) for a in np.linspace(-60.0, 60.0, 10))


@dataclass(frozen=True)
class SweepPoint:
    """One receiver position; ``report`` is None where the pilot is unusable."""

    label: str
    angle_deg: float
    power_db: float
    report: RxReport | None


def angular_sweep(
    plan: SteeringPlan,
    book: Codebook,
    cfg: LinkConfig,
    angles: Sequence[float] | None = None,
    symbols: "Sequence[int] | np.ndarray | None" = None,
) -> list[SweepPoint]:
    """Run the link at every receive angle with one transmitted payload.

    Power is the mean |statistic|² of the harmonic correlator, in dB relative
    to the sweep maximum. Es/N0 refers to the beam-peak amplitude, so angles
    off the main lobe see a lower SNR. Angle i draws noise from its own
    stream, so results do not depend on worker count.
    """
    positions = list(DEFAULT_SWEEP_ANGLES if angles is None else angles)
    if not positions:
        raise ValidationError("Angle list is empty", subcategory="LEN")
    if any(abs(a) > 90 for a in positions):
        raise ValidationError("Sweep angles must lie within [−90°, 90°]", subcategory="RNG")
    if plan.harmonic != book.scheme.harmonic:
        raise ValidationError(
            f"Plan harmonic {plan.harmonic} differs from codebook harmonic "
            f"{book.scheme.harmonic}",
            subcategory="RNG",
        )

    modulation = cfg.modulation.model_dump()
    modulation["shift"] = plan.shift
    base_cfg = cfg.with_updates(modulation=modulation)
    sent = (
        np.asarray(symbols, dtype=int)
        if symbols is not None
        else data_symbols(base_cfg, book, make_streams(cfg.seed, 0).data)
    )
    schedule = column_schedule(book, sent, base_cfg)
    amplitude = reference_amplitude(base_cfg, book)

    def run_angle(item: tuple[int, float]) -> tuple[float, RxReport | None]:
        index, angle = item
        angle_cfg = base_cfg.with_updates(rx_angle=angle)
        clean = synthesize_rx_waveform(schedule, angle_cfg)
        received = apply_channel(
            clean,
            angle_cfg,
            rng=make_streams(cfg.seed, index).noise,
            reference_amplitude=amplitude,
        )
        statistics = harmonic_correlations(received, angle_cfg, plan.harmonic)
        power = float(np.mean(np.abs(statistics) ** 2))
        try:
            return power, demodulate(received, angle_cfg, book, sent)
        except PilotUnusableError:
            logger.warning(f"No usable pilot at {angle}°; constellation not reported")
            return power, None

    workers = get_config().workers
    items = list(enumerate(positions))
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_angle, items))
    else:
        results = [run_angle(item) for item in items]

    powers = np.array([power for power, _ in results])
    # Normalized like an amplitude pattern: 10·log10(P/Pmax) == 20·log10(√P/√Pmax).
    levels = to_db(np.sqrt(powers))
    points = [
        SweepPoint(f"P{i + 1}", float(angle), float(level), report)
        for i, (angle, level, (_, report)) in enumerate(
            zip(positions, levels, results, strict=True)
        )
    ]
    logger.info(
        f"Angular sweep over {len(points)} angles: peak at {sweep_peak(points):.2f}°"
    )
    return points


def sweep_peak(points: Sequence[SweepPoint]) -> float:
    """Angle of maximum power; ties go to the smallest |angle|, then the smallest angle."""
    if not points:
        raise ValidationError("No sweep points", subcategory="LEN")
    top = max(p.power_db for p in points)
    best = min(
        (p for p in points if p.power_db >= top - 1e-9),
        key=lambda p: (abs(p.angle_deg), p.angle_deg),
    )
    return best.angle_deg


@dataclass(frozen=True)
class SerPoint:
    esn0_db: float
    ser: float
    symbols: int
    measured_snr_db: float | None
    theory_ser: float | None


@toolkit_operation("ser_curve", log_threshold_ms=60_000.0)
def ser_curve(
    cfg: LinkConfig,
    book: Codebook,
    esn0_db_list: Sequence[float],
    trials: int = 1,
) -> list[SerPoint]:
    """Monte Carlo SER per Es/N0 with the matching M-PSK theory value.

    Trial t at list position i uses the streams of draw (1, i, t). Theory is
    evaluated at the measured post-filter SNR averaged over trials.
    """
    if trials < 1:
        raise ValidationError(f"trials must be >= 1 (got {trials})", subcategory="RNG")
    kind = cfg.channel.kind if cfg.channel.kind in ("multipath", "office") else "awgn"
    points = []
    for i, esn0_db in enumerate(esn0_db_list):
        point_cfg = cfg.with_updates(
            channel={**cfg.channel.model_dump(), "kind": kind, "esn0_db": esn0_db}
        )
        errors = 0
        total = 0
        snrs = []
        for t in range(trials):
            report = run_link(point_cfg, book, draw=(1, i, t))
            errors += report.symbol_errors
            total += report.truth.size
            if report.post_filter_snr_db is not None:
                snrs.append(10 ** (report.post_filter_snr_db / 10))
        snr = float(np.mean(snrs)) if snrs else None
        points.append(
            SerPoint(
                esn0_db=float(esn0_db),
                ser=errors / total,
                symbols=total,
                measured_snr_db=None if snr is None else float(10 * np.log10(snr)),
                theory_ser=None if snr is None else psk_ser(book.scheme.order, snr),
            )
        )
        logger.debug(f"Es/N0={esn0_db} dB: SER={errors / total:.4g} over {total} symbols")
    return points
