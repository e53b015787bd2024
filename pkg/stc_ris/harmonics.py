"""Harmonic coefficients generated by periodic time coding.

Each bit m of a code contributes a vector

    Ã_m · (1/L) · sinc(πn/L) · exp(−j·n·(2m−1)·π/L)

to the n-th harmonic (unnormalized sinc, sinc(0) = 1). The coefficient is the
sum of those vectors, carrier-normalized. ``oracle_coefficient`` integrates
the piecewise-constant waveform independently for verification.
"""

import math
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cache import CoefficientCache, get_cache
from .codes import (
    BINARY,
    DEFAULT_BIT_DURATION,
    Alphabet,
    TimeCode,
    check_enumeration_size,
    code_from_number,
    get_alphabet,
    state_index_block,
)
from .config import get_config
from .decorators import toolkit_operation
from .errors import ValidationError
from .logging import get_logger
from .monitoring.metrics import record_work
from .utils.common import write_csv

logger = get_logger("harmonics")


def _is_nonzero_multiple(order: int, length: int) -> bool:
    return order != 0 and order % length == 0


def bit_weights(length: int, order: int) -> np.ndarray:
    """Per-bit weights (1/L)·sinc(πn/L)·exp(−jn(2m−1)π/L) for m = 1..L.

    All weights are exactly zero when n is a nonzero multiple of L.
    """
    if _is_nonzero_multiple(order, length):
        return np.zeros(length, dtype=complex)
    m = np.arange(1, length + 1)
    # np.sinc is the normalized sinc: np.sinc(n/L) == sin(πn/L)/(πn/L)
    envelope = np.sinc(order / length) / length
    return envelope * np.exp(-1j * order * (2 * m - 1) * np.pi / length)


def bit_vector(code: TimeCode, m: int, n: int) -> complex:
    """Contribution of bit m (1-based) to harmonic n."""
    if not 1 <= m <= code.length:
        raise ValidationError(
            f"Bit index {m} outside 1..{code.length}", subcategory="RNG", bit=m
        )
    state = code.alphabet.values[code.states[m - 1]]
    if state == 0 or _is_nonzero_multiple(n, code.length):
        return 0j
    return complex(state * bit_weights(code.length, n)[m - 1])


def harmonic_coefficient(code: TimeCode, n: int) -> complex:
    """Complex amplitude c_n of harmonic n: the sum of all bit vectors."""
    if _is_nonzero_multiple(n, code.length):
        return 0j
    return complex(np.dot(code.values, bit_weights(code.length, n)))


def oracle_coefficient(code: TimeCode, n: int, resolution: int | None = None) -> complex:
    """Evaluate (1/T)∫₀ᵀ w(t)·exp(−j2πnt/T) dt by exact segment integration.

    The period is split into ``resolution`` segments (rounded up to a whole
    number per bit, at least 16 per bit); each constant segment [a, b) is
    integrated in closed form, so the result is exact up to rounding.
    """
    length = code.length
    if resolution is None:
        resolution = 16 * length
    if resolution < 16 * length:
        raise ValidationError(
            f"Oracle resolution must be at least 16·L = {16 * length} (got {resolution})",
            subcategory="RNG",
        )
    per_bit = math.ceil(resolution / length)
    # Work in units of the period: u = t/T.
    edges = np.arange(length * per_bit + 1) / (length * per_bit)
    levels = np.repeat(code.values, per_bit)
    if n == 0:
        return complex(np.sum(levels * np.diff(edges)))
    omega = 2 * np.pi * n
    phasors = np.exp(-1j * omega * edges)
    segments = (phasors[:-1] - phasors[1:]) / (1j * omega)
    return complex(np.sum(levels * segments))


@dataclass(frozen=True)
class HarmonicPoint:
    """Amplitude and phase of one generated harmonic."""

    order: int
    coefficient: complex
    frequency_hz: float = 0.0

    @property
    def magnitude(self) -> float:
        return abs(self.coefficient)

    @property
    def phase_deg(self) -> float:
        return math.degrees(np.angle(self.coefficient))


def spectrum(code: TimeCode, n_max: int) -> list[HarmonicPoint]:
    """Harmonics n = −n_max..n_max with frequencies n/(L·τ) Hz."""
    if n_max < 0:
        raise ValidationError(f"n_max must be >= 0 (got {n_max})", subcategory="RNG")
    period = code.period
    return [
        HarmonicPoint(n, harmonic_coefficient(code, n), n / period)
        for n in range(-n_max, n_max + 1)
    ]


def _compute_table(length: int, order: int, alphabet: Alphabet) -> np.ndarray:
    total = alphabet.size**length
    config = get_config()
    weights = bit_weights(length, order)
    values = np.asarray(alphabet.values, dtype=complex)
    bounds = [
        (start, min(start + config.chunk_size, total))
        for start in range(0, total, config.chunk_size)
    ]

    def work(bound: tuple[int, int]) -> np.ndarray:
        indices = state_index_block(length, alphabet, *bound)
        return values[indices] @ weights

    logger.debug(
        f"Computing {total} coefficients (L={length}, n={order}, {alphabet.name}) "
        f"in {len(bounds)} chunk(s) with {config.workers} worker(s)"
    )
    if config.workers > 1 and len(bounds) > 1:
        # map() keeps chunk order, so the merged table is worker-independent.
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(work, bounds))
    else:
        parts = [work(b) for b in bounds]
    record_work("codes_enumerated", total)
    return np.concatenate(parts)


def coefficient_table(
    length: int,
    order: int,
    alphabet: "str | Alphabet" = BINARY,
    cap: int | None = None,
    cache: CoefficientCache | None = None,
) -> np.ndarray:
    """c_n of every code of length L, in enumeration order (read-only array)."""
    alpha = get_alphabet(alphabet)
    check_enumeration_size(length, alpha, cap)
    store = cache or get_cache()
    key = CoefficientCache.make_key(length, order, alpha.name)
    return store.get_or_compute(key, lambda: _compute_table(length, order, alpha))


@dataclass(frozen=True)
class ConstellationMap:
    """All harmonic-n coefficients reachable by codes of length L.

    ``coefficients[i]`` belongs to the i-th code of the enumeration order;
    codes are materialized on demand.
    """

    length: int
    order: int
    alphabet: Alphabet
    coefficients: np.ndarray
    bit_duration: float = DEFAULT_BIT_DURATION

    def __len__(self) -> int:
        return len(self.coefficients)

    def code(self, index: int) -> TimeCode:
        return code_from_number(index, self.length, self.alphabet, self.bit_duration)

    @property
    def points(self) -> Iterator[tuple[TimeCode, complex]]:
        """(code, coefficient) pairs in enumeration order."""
        for index, value in enumerate(self.coefficients):
            yield self.code(index), complex(value)


@toolkit_operation("constellation_map")
def constellation_map(
    length: int,
    n: int,
    alphabet: "str | Alphabet" = BINARY,
    bit_duration: float = DEFAULT_BIT_DURATION,
    cap: int | None = None,
) -> ConstellationMap:
    """Enumerate every code of length L and its harmonic-n coefficient."""
    alpha = get_alphabet(alphabet)
    table = coefficient_table(length, n, alpha, cap)
    return ConstellationMap(length, n, alpha, table, bit_duration)


def write_spectrum_csv(points: list[HarmonicPoint], path: str | Path) -> Path:
    """Columns ``n,freq_hz,re,im,mag,phase_deg``."""
    return write_csv(
        path,
        ("n", "freq_hz", "re", "im", "mag", "phase_deg"),
        (
            (
                p.order,
                float(p.frequency_hz),
                float(p.coefficient.real),
                float(p.coefficient.imag),
                float(p.magnitude),
                float(p.phase_deg),
            )
            for p in points
        ),
    )


def _constellation_rows(cmap: ConstellationMap) -> Iterator[tuple[object, ...]]:
    chars = np.array(list(cmap.alphabet.chars))
    chunk = get_config().chunk_size
    for start in range(0, len(cmap), chunk):
        stop = min(start + chunk, len(cmap))
        indices = state_index_block(cmap.length, cmap.alphabet, start, stop)
        values = cmap.coefficients[start:stop]
        yield from zip(
            ("".join(row) for row in chars[indices]),
            values.real.tolist(),
            values.imag.tolist(),
            np.abs(values).tolist(),
            np.degrees(np.angle(values)).tolist(),
            strict=True,
        )


def write_constellation_csv(cmap: ConstellationMap, path: str | Path) -> Path:
    """Columns ``code,re,im,mag,phase_deg``; one row per code."""
    return write_csv(
        path, ("code", "re", "im", "mag", "phase_deg"), _constellation_rows(cmap)
    )
