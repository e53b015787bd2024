"""Codebooks realizing M-PSK constellations in one harmonic.

Two designers are provided: ``design_by_shift`` rotates a single base code
(exact spacing, equal magnitudes) and ``search_codebook`` scans every code
of length L for the largest common ring amplitude.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .codes import (
    BINARY,
    DEFAULT_BIT_DURATION,
    Alphabet,
    TimeCode,
    code_from_number,
    format_code,
    get_alphabet,
    parse_code,
    rotate,
)
from .config import get_config
from .decorators import toolkit_operation, with_input_validation
from .errors import InfeasibleDesignError, ResourceNotFoundError, ValidationError
from .harmonics import coefficient_table, harmonic_coefficient
from .logging import get_logger
from .utils.common import bits_to_int, gray_decode, parse_bits, write_json

logger = get_logger("codebook")

# Codes whose coefficient is this small carry no phase.
ZERO_COEFFICIENT = 1e-12

SCHEME_ORDERS = {"bpsk": 2, "qpsk": 4, "8psk": 8, "16psk": 16}


def wrap_phase(phase: "float | np.ndarray") -> "float | np.ndarray":
    """Wrap to (−π, π]."""
    return np.pi - np.mod(np.pi - phase, 2 * np.pi)


@dataclass(frozen=True)
class ModulationScheme:
    """M-PSK target: M phases spaced 2π/M from ``offset`` in harmonic n."""

    order: int
    harmonic: int = 1
    offset: float = 0.0

    def __post_init__(self) -> None:
        if self.order < 2 or self.order & (self.order - 1):
            raise ValidationError(
                f"Constellation order must be a power of two >= 2 (got {self.order})",
                subcategory="RNG",
            )
        if self.harmonic == 0:
            raise ValidationError(
                "Harmonic 0 is the unmodulated carrier; pick n != 0",
                subcategory="RNG",
            )
        if not 0 <= self.offset < 2 * math.pi / self.order:
            raise ValidationError(
                f"Phase offset must lie in [0, 2π/M) = [0, {2 * math.pi / self.order:.6g}) "
                f"(got {self.offset})",
                subcategory="RNG",
            )

    @classmethod
    def from_name(
        cls, name: str, harmonic: int = 1, offset: float = 0.0
    ) -> "ModulationScheme":
        """Build from ``bpsk``, ``qpsk``, ``8psk`` or ``16psk``."""
        try:
            order = SCHEME_ORDERS[name.lower()]
        except KeyError:
            raise ValidationError(
                f"Unknown scheme {name!r}; expected one of {sorted(SCHEME_ORDERS)}",
                subcategory="FMT",
            ) from None
        return cls(order, harmonic, offset)

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1

    @property
    def target_phases(self) -> np.ndarray:
        """Strictly increasing phases in [0, 2π)."""
        return self.offset + 2 * np.pi * np.arange(self.order) / self.order

    @property
    def name(self) -> str:
        return {v: k for k, v in SCHEME_ORDERS.items()}.get(self.order, f"{self.order}psk")


@dataclass(frozen=True)
class CodebookEntry:
    symbol: int
    code: TimeCode
    coefficient: complex


@dataclass(frozen=True)
class CodebookQuality:
    """Design quality of a codebook.

    Attributes:
        max_phase_err_rad: worst |arg c_n − target| over symbols
        amp_spread: worst | |c_n| / ring − 1 | over symbols
        leakage: worst of |c_2n|/|c_n| and |c_(n+1)|/|c_n| over symbols
    """

    max_phase_err_rad: float
    amp_spread: float
    leakage: float


@dataclass(frozen=True)
class Codebook:
    scheme: ModulationScheme
    entries: tuple[CodebookEntry, ...]
    ring_amplitude: float
    quality: CodebookQuality
    method: str = "shift"

    def __post_init__(self) -> None:
        symbols = sorted(e.symbol for e in self.entries)
        if symbols != list(range(self.scheme.order)):
            raise ValidationError(
                f"Codebook needs symbols 0..{self.scheme.order - 1} exactly once "
                f"(got {symbols})",
                subcategory="COD",
            )
        lengths = {e.code.length for e in self.entries}
        durations = {e.code.bit_duration for e in self.entries}
        if len(lengths) != 1 or len(durations) != 1:
            raise ValidationError(
                "All codebook entries must share L and tau", subcategory="LEN"
            )

    @property
    def length(self) -> int:
        return self.entries[0].code.length

    @property
    def bit_duration(self) -> float:
        return self.entries[0].code.bit_duration

    @property
    def alphabet(self) -> Alphabet:
        return self.entries[0].code.alphabet

    def entry(self, symbol: int) -> CodebookEntry:
        for item in self.entries:
            if item.symbol == symbol:
                return item
        raise ValidationError(f"No codebook entry for symbol {symbol}")

    def code_for(self, symbol: int) -> TimeCode:
        return self.entry(symbol).code

    @property
    def coefficients(self) -> np.ndarray:
        """Harmonic-n coefficient of each symbol, indexed by symbol."""
        ordered = sorted(self.entries, key=lambda e: e.symbol)
        return np.array([e.coefficient for e in ordered], dtype=complex)

    def to_dict(self) -> dict[str, Any]:
        return CodebookDocument.from_codebook(self).model_dump()


def _quality(
    scheme: ModulationScheme, coefficients: np.ndarray, ring: float, codes: Sequence[TimeCode]
) -> CodebookQuality:
    errors = np.abs(wrap_phase(np.angle(coefficients) - scheme.target_phases))
    spread = np.abs(np.abs(coefficients) / ring - 1.0)
    leak = [_leakage_pair(c, scheme.harmonic) for c in codes]
    return CodebookQuality(
        max_phase_err_rad=float(np.max(errors)),
        amp_spread=float(np.max(spread)),
        leakage=float(max(max(pair) for pair in leak)),
    )


def _leakage_pair(code: TimeCode, n: int) -> tuple[float, float]:
    main = abs(harmonic_coefficient(code, n))
    if main <= ZERO_COEFFICIENT:
        raise ValidationError(
            f"Code {format_code(code)} has no harmonic-{n} content; leakage is undefined",
            subcategory="COD",
        )
    return (
        abs(harmonic_coefficient(code, 2 * n)) / main,
        abs(harmonic_coefficient(code, n + 1)) / main,
    )


def shift_step(length: int, harmonic: int, order: int) -> int | None:
    """Smallest s* in 1..L−1 with n·s* ≡ L/M (mod L), or None."""
    if length % order:
        return None
    target = length // order
    for s in range(1, length):
        if (harmonic * s) % length == target:
            return s
    return None


@toolkit_operation("design_by_shift")
def design_by_shift(base: TimeCode, scheme: ModulationScheme) -> Codebook:
    """Rotate one base code to place the M symbols of an M-PSK ring.

    Symbol k uses rotate(base, r0 + k·s*), where each s*-bit step advances the
    harmonic phase by exactly 2π/M and r0 brings symbol 0 as close to the
    scheme offset as the base allows.
    """
    L, n, M = base.length, scheme.harmonic, scheme.order
    base_coeff = harmonic_coefficient(base, n)
    if abs(base_coeff) <= 1e-9:
        raise InfeasibleDesignError(
            f"Base code {format_code(base)} has zero harmonic-{n} coefficient",
            subcategory="ZERO",
        )
    step = shift_step(L, n, M)
    if step is None:
        raise InfeasibleDesignError(
            f"scheme unreachable by shifts for (L={L}, n={n}, M={M})",
            subcategory="SHFT",
            length=L,
            harmonic=n,
            order=M,
        )

    base_phase = float(np.angle(base_coeff))
    rotations = np.arange(L)
    offsets = np.abs(wrap_phase(base_phase + 2 * np.pi * n * rotations / L - scheme.offset))
    start = int(np.argmin(offsets))  # first minimum: smallest rotation wins ties

    codes = [rotate(base, start + k * step) for k in range(M)]
    coefficients = np.array([harmonic_coefficient(c, n) for c in codes])
    ring = abs(base_coeff)
    book = Codebook(
        scheme=scheme,
        entries=tuple(
            CodebookEntry(k, c, complex(v))
            for k, (c, v) in enumerate(zip(codes, coefficients, strict=True))
        ),
        ring_amplitude=ring,
        quality=_quality(scheme, coefficients, ring, codes),
        method="shift",
    )
    logger.info(
        f"Shift codebook {scheme.name} L={L} n={n}: s*={step}, r0={start}, "
        f"ring={ring:.6g}, offset error={book.quality.max_phase_err_rad:.3g} rad"
    )
    return book


def _merge_intervals(lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(lo, kind="stable")
    lo, hi = lo[order], hi[order]
    merged_lo: list[float] = []
    merged_hi: list[float] = []
    for a, b in zip(lo.tolist(), hi.tolist(), strict=True):
        if merged_hi and a <= merged_hi[-1]:
            merged_hi[-1] = max(merged_hi[-1], b)
        else:
            merged_lo.append(a)
            merged_hi.append(b)
    return np.array(merged_lo), np.array(merged_hi)


def _covered(points: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    index = np.searchsorted(lo, points, side="right") - 1
    inside = index >= 0
    safe = np.clip(index, 0, None)
    return inside & (points <= hi[safe])


def _check_search_tolerances(arguments: dict[str, Any]) -> None:
    amp_tol = arguments["amp_tol"]
    phase_tol = arguments["phase_tol"]
    order = arguments["scheme"].order
    if not 0 < amp_tol <= 0.5:
        raise ValidationError(
            f"amp_tol must be in (0, 0.5] (got {amp_tol})", subcategory="RNG"
        )
    if phase_tol is not None and not 0 < phase_tol <= math.pi / order + 1e-15:
        raise ValidationError(
            f"phase_tol must be in (0, π/M] (got {phase_tol})", subcategory="RNG"
        )


@toolkit_operation("search_codebook")
@with_input_validation(_check_search_tolerances)
def search_codebook(
    length: int,
    scheme: ModulationScheme,
    amp_tol: float = 0.05,
    phase_tol: float | None = None,
    alphabet: "str | Alphabet" = BINARY,
    bit_duration: float = DEFAULT_BIT_DURATION,
    cap: int | None = None,
) -> Codebook:
    """Exhaustive search for the largest common ring amplitude.

    Every code of length L is a candidate for a target phase when its phase
    error is within ``phase_tol``; it then admits ring amplitudes A with
    A(1−amp_tol) ≤ |c_n| ≤ A(1+amp_tol). The largest A admitted for every
    phase wins. Per phase, the code is chosen by smallest phase error, then
    smallest leakage, then lexicographically smallest code.

    Raises:
        InfeasibleDesignError: when no common ring exists; ``details`` holds
            the best achievable phase error per target phase.
    """
    alpha = get_alphabet(alphabet)
    n, M = scheme.harmonic, scheme.order
    if phase_tol is None:
        phase_tol = math.pi / (2 * M)

    table = coefficient_table(length, n, alpha, cap)
    magnitude = np.abs(table)
    usable = magnitude > ZERO_COEFFICIENT
    phase = np.angle(table)
    targets = scheme.target_phases
    # Per target phase: indices of codes within phase_tol and their errors.
    candidate_index: list[np.ndarray] = []
    candidate_error: list[np.ndarray] = []
    best: list[float] = []
    for target in targets:
        error = np.abs(wrap_phase(phase - target))
        error[~usable] = np.inf
        best.append(float(np.min(error)))
        index = np.flatnonzero(error <= phase_tol + 1e-12)
        candidate_index.append(index)
        candidate_error.append(error[index])

    merged = []
    for index in candidate_index:
        radii = magnitude[index]
        merged.append(_merge_intervals(radii / (1 + amp_tol), radii / (1 - amp_tol)))

    ring: float | None = None
    if all(len(lo) for lo, _ in merged):
        tops = np.unique(np.concatenate([hi for _, hi in merged]))[::-1]
        feasible = np.ones(len(tops), dtype=bool)
        for lo, hi in merged:
            feasible &= _covered(tops, lo, hi)
        if feasible.any():
            ring = float(tops[np.argmax(feasible)])

    if ring is None:
        table_text = ", ".join(
            f"{math.degrees(t):.2f}°: {math.degrees(b):.3f}°"
            for t, b in zip(targets, best, strict=True)
        )
        raise InfeasibleDesignError(
            f"No common ring for {scheme.name} with L={length}, n={n}, "
            f"amp_tol={amp_tol}, phase_tol={phase_tol:.6g} rad; best phase error per "
            f"target: {table_text}",
            subcategory="RING",
            per_phase_best_error_rad=best,
            target_phases_rad=targets.tolist(),
        )

    second = np.abs(coefficient_table(length, 2 * n, alpha, cap))
    adjacent = np.abs(coefficient_table(length, n + 1, alpha, cap))
    with np.errstate(divide="ignore", invalid="ignore"):
        leakage = np.where(usable, np.maximum(second, adjacent) / magnitude, np.inf)

    in_band = (magnitude >= ring * (1 - amp_tol) * (1 - 1e-12)) & (
        magnitude <= ring * (1 + amp_tol) * (1 + 1e-12)
    )
    chosen: list[int] = []
    for index, error in zip(candidate_index, candidate_error, strict=True):
        keep = in_band[index]
        pool, pool_error = index[keep], error[keep]
        # Rounded so that last-bit differences never decide a tie.
        ranking = np.lexsort(
            (pool, np.round(leakage[pool], 12), np.round(pool_error, 12))
        )
        chosen.append(int(pool[ranking[0]]))

    codes = [code_from_number(i, length, alpha, bit_duration) for i in chosen]
    coefficients = np.array([harmonic_coefficient(c, n) for c in codes])
    book = Codebook(
        scheme=scheme,
        entries=tuple(
            CodebookEntry(k, c, complex(v))
            for k, (c, v) in enumerate(zip(codes, coefficients, strict=True))
        ),
        ring_amplitude=ring,
        quality=_quality(scheme, coefficients, ring, codes),
        method="search",
    )
    logger.info(
        f"Searched codebook {scheme.name} L={length} n={n}: ring={ring:.6g}, "
        f"max phase error={book.quality.max_phase_err_rad:.3g} rad, "
        f"leakage={book.quality.leakage:.3g}"
    )
    return book


@dataclass(frozen=True)
class LeakageReport:
    """Per-symbol harmonic leakage of a codebook.

    ``second[k]`` is |c_2n|/|c_n| and ``adjacent[k]`` is |c_(n+1)|/|c_n| for
    symbol k.
    """

    second: tuple[float, ...]
    adjacent: tuple[float, ...]
    threshold: float
    flagged: tuple[int, ...] = field(default=())

    @property
    def max_second(self) -> float:
        return max(self.second)

    @property
    def max_adjacent(self) -> float:
        return max(self.adjacent)

    @property
    def max_leakage(self) -> float:
        return max(self.max_second, self.max_adjacent)


def leakage_metrics(book: Codebook, threshold: float | None = None) -> LeakageReport:
    """Second- and adjacent-harmonic leakage ratios for every symbol.

    Symbols whose larger ratio exceeds ``threshold`` (default from
    ``STC_LEAKAGE_THRESHOLD``) are flagged.
    """
    limit = get_config().leakage_threshold if threshold is None else threshold
    pairs = [
        _leakage_pair(book.code_for(k), book.scheme.harmonic)
        for k in range(book.scheme.order)
    ]
    flagged = tuple(k for k, pair in enumerate(pairs) if max(pair) > limit)
    if flagged:
        logger.warning(
            f"{len(flagged)} symbol(s) exceed leakage threshold {limit}: {list(flagged)}"
        )
    return LeakageReport(
        second=tuple(p[0] for p in pairs),
        adjacent=tuple(p[1] for p in pairs),
        threshold=limit,
        flagged=flagged,
    )


def symbols_from_bits(bits: "str | Sequence[int]", scheme: ModulationScheme) -> list[int]:
    """Gray-map payload bits to symbol indices (MSB first per group)."""
    values = parse_bits(bits) if isinstance(bits, str) else [int(b) for b in bits]
    k = scheme.bits_per_symbol
    if len(values) % k:
        raise ValidationError(
            f"Payload of {len(values)} bits is not a multiple of {k} "
            f"(bits per {scheme.name} symbol)",
            subcategory="LEN",
            required_multiple=k,
        )
    return [gray_decode(bits_to_int(values[i : i + k])) for i in range(0, len(values), k)]


def map_bits_to_schedule(
    book: Codebook, payload: "str | Sequence[int]", reps: int = 1
) -> list[TimeCode]:
    """Gray-coded symbol codes, each repeated ``reps`` times."""
    if reps < 1:
        raise ValidationError(f"reps must be >= 1 (got {reps})", subcategory="RNG")
    symbols = symbols_from_bits(payload, book.scheme)
    return [book.code_for(s) for s in symbols for _ in range(reps)]


# JSON document models


class ComplexModel(BaseModel):
    re: float
    im: float

    @classmethod
    def of(cls, value: complex) -> "ComplexModel":
        return cls(re=float(value.real), im=float(value.imag))

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


class SchemeModel(BaseModel):
    M: int
    n: int
    L: int
    offset_rad: float = 0.0
    alphabet: str = "binary"
    method: str = "shift"
    tau: float = DEFAULT_BIT_DURATION


class EntryModel(BaseModel):
    symbol: int = Field(ge=0)
    code: str
    coeff: ComplexModel


class QualityModel(BaseModel):
    max_phase_err_rad: float
    amp_spread: float
    leakage: float


class CodebookDocument(BaseModel):
    """On-disk codebook: scheme, ring amplitude, entries and quality."""

    model_config = ConfigDict(extra="ignore")

    scheme: SchemeModel
    ring_amplitude: float = Field(gt=0)
    entries: list[EntryModel]
    quality: QualityModel

    @field_validator("entries")
    @classmethod
    def _entries_present(cls, value: list[EntryModel]) -> list[EntryModel]:
        if not value:
            raise ValueError("codebook has no entries")
        return value

    @classmethod
    def from_codebook(cls, book: Codebook) -> "CodebookDocument":
        return cls(
            scheme=SchemeModel(
                M=book.scheme.order,
                n=book.scheme.harmonic,
                L=book.length,
                offset_rad=book.scheme.offset,
                alphabet=book.alphabet.name,
                method=book.method,
                tau=book.bit_duration,
            ),
            ring_amplitude=book.ring_amplitude,
            entries=[
                EntryModel(
                    symbol=e.symbol,
                    code=format_code(e.code),
                    coeff=ComplexModel.of(e.coefficient),
                )
                for e in sorted(book.entries, key=lambda e: e.symbol)
            ],
            quality=QualityModel(
                max_phase_err_rad=book.quality.max_phase_err_rad,
                amp_spread=book.quality.amp_spread,
                leakage=book.quality.leakage,
            ),
        )

    def to_codebook(self) -> Codebook:
        scheme = ModulationScheme(self.scheme.M, self.scheme.n, self.scheme.offset_rad)
        entries = []
        for item in self.entries:
            code = parse_code(item.code, self.scheme.tau, self.scheme.alphabet)
            if code.length != self.scheme.L:
                raise ValidationError(
                    f"Entry {item.symbol} has length {code.length}, scheme says L={self.scheme.L}",
                    subcategory="LEN",
                )
            entries.append(CodebookEntry(item.symbol, code, item.coeff.to_complex()))
        return Codebook(
            scheme=scheme,
            entries=tuple(entries),
            ring_amplitude=self.ring_amplitude,
            quality=CodebookQuality(
                self.quality.max_phase_err_rad,
                self.quality.amp_spread,
                self.quality.leakage,
            ),
            method=self.scheme.method,
        )


def save_codebook(book: Codebook, path: str | Path) -> Path:
    return write_json(path, book.to_dict())


def load_codebook(path: str | Path) -> Codebook:
    """Read and validate a codebook JSON document."""
    source = Path(path)
    if not source.is_file():
        raise ResourceNotFoundError(f"Codebook file not found: {source}", path=str(source))
    try:
        document = CodebookDocument.model_validate_json(source.read_text(encoding="utf-8"))
    except ValueError as e:
        raise ValidationError(
            f"Invalid codebook document {source}: {e}", subcategory="FMT", original_error=e
        ) from e
    return document.to_codebook()
