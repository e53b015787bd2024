"""Periodic cell-state codes: representation, parsing, rotation, enumeration.

A ``TimeCode`` is the L-bit sequence that drives one surface cell, repeated
with period ``T = L * bit_duration``. Bits are indexed 1..L in all formulas;
Python containers are 0-based, so ``states[m - 1]`` is bit m.
"""

import itertools
import math
from collections.abc import Iterator
from dataclasses import dataclass, field

import numpy as np

from .config import get_config
from .errors import CodeParseError, EnumerationCapError, ValidationError
from .logging import get_logger

logger = get_logger("codes")

# Bit duration used in the published measurements (seconds).
DEFAULT_BIT_DURATION = 3.74e-3


@dataclass(frozen=True)
class CellState:
    """Complex reflection weight of one bit (dimensionless)."""

    value: complex

    def __post_init__(self) -> None:
        if abs(self.value) > 1 + 1e-12:
            raise ValidationError(
                f"Cell state magnitude must not exceed 1 (got {abs(self.value):.6g})",
                subcategory="RNG",
            )


@dataclass(frozen=True)
class Alphabet:
    """A set of cell states and the characters that spell them."""

    name: str
    chars: str
    values: tuple[complex, ...]

    @property
    def size(self) -> int:
        return len(self.chars)

    def index_of(self, char: str) -> int:
        return self.chars.index(char)

    def state(self, index: int) -> CellState:
        return CellState(self.values[index])

    @property
    def is_real(self) -> bool:
        return all(v.imag == 0 for v in self.values)


BINARY = Alphabet("binary", "01", (0j, 1 + 0j))
# 1∠0 and 1∠π spelled "+" and "-".
TERNARY = Alphabet("ternary", "0+-", (0j, 1 + 0j, -1 + 0j))

ALPHABETS = {BINARY.name: BINARY, TERNARY.name: TERNARY}


def get_alphabet(name: "str | Alphabet") -> Alphabet:
    """Look up an alphabet by name ("binary" or "ternary")."""
    if isinstance(name, Alphabet):
        return name
    try:
        return ALPHABETS[name.lower()]
    except KeyError:
        raise ValidationError(
            f"Unknown alphabet {name!r}; expected one of {sorted(ALPHABETS)}",
            subcategory="FMT",
        ) from None


@dataclass(frozen=True)
class TimeCode:
    """An L-bit periodic cell-state sequence with bit duration tau.

    Attributes:
        states: alphabet index of each bit, bit 1 first
        bit_duration: tau in seconds
        alphabet: the state set the indices refer to
    """

    states: tuple[int, ...]
    bit_duration: float = DEFAULT_BIT_DURATION
    alphabet: Alphabet = field(default=BINARY)

    def __post_init__(self) -> None:
        if len(self.states) < 1:
            raise ValidationError("A code needs at least one bit", subcategory="LEN")
        if not self.bit_duration > 0:
            raise ValidationError(
                f"Bit duration must be positive (got {self.bit_duration})",
                subcategory="RNG",
            )
        for position, index in enumerate(self.states, start=1):
            if not 0 <= index < self.alphabet.size:
                raise ValidationError(
                    f"State index {index} at bit {position} is outside the "
                    f"{self.alphabet.name} alphabet",
                    subcategory="COD",
                    position=position,
                )

    @property
    def length(self) -> int:
        """Number of bits L."""
        return len(self.states)

    @property
    def period(self) -> float:
        """Code period T = L * tau in seconds."""
        return self.length * self.bit_duration

    @property
    def cells(self) -> tuple[CellState, ...]:
        return tuple(self.alphabet.state(i) for i in self.states)

    @property
    def values(self) -> np.ndarray:
        """Complex state weight of each bit as an array (bit 1 first)."""
        return np.array([self.alphabet.values[i] for i in self.states], dtype=complex)

    def bit(self, m: int) -> CellState:
        """State of bit m (1-based)."""
        if not 1 <= m <= self.length:
            raise ValidationError(
                f"Bit index {m} outside 1..{self.length}", subcategory="RNG"
            )
        return self.alphabet.state(self.states[m - 1])

    def __str__(self) -> str:
        return format_code(self)


def format_code(code: TimeCode) -> str:
    """Spell a code in its alphabet's characters (bit 1 leftmost)."""
    return "".join(code.alphabet.chars[i] for i in code.states)


def parse_code(
    text: str,
    bit_duration: float = DEFAULT_BIT_DURATION,
    alphabet: "str | Alphabet" = BINARY,
) -> TimeCode:
    """Parse a code string; the leftmost character is bit 1.

    Raises:
        CodeParseError: on an empty string or a character outside the alphabet;
            ``details['position']`` holds the 1-based offending position.
    """
    alpha = get_alphabet(alphabet)
    if not text:
        raise CodeParseError("Code text is empty", position=0)

    states = []
    for position, char in enumerate(text, start=1):
        if char not in alpha.chars:
            raise CodeParseError(
                f"Invalid character {char!r} at position {position} for the "
                f"{alpha.name} alphabet (allowed: {alpha.chars!r})",
                position=position,
                character=char,
            )
        states.append(alpha.index_of(char))

    return TimeCode(tuple(states), bit_duration, alpha)


def rotate(code: TimeCode, s: int) -> TimeCode:
    """Cyclically advance a code by s bits.

    Bit m of the result is bit ((m + s - 1) mod L) + 1 of the input, which
    multiplies harmonic n by exp(+j*2*pi*n*s/L). Any integer s is accepted.
    """
    k = s % code.length
    if k == 0:
        return code
    return TimeCode(code.states[k:] + code.states[:k], code.bit_duration, code.alphabet)


def count_codes(length: int, alphabet: "str | Alphabet" = BINARY) -> int:
    """Number of distinct codes of the given length: a**L."""
    return get_alphabet(alphabet).size ** length


def check_enumeration_size(
    length: int, alphabet: "str | Alphabet" = BINARY, cap: int | None = None
) -> int:
    """Return a**L or refuse with a size estimate when it exceeds the cap."""
    alpha = get_alphabet(alphabet)
    if length < 1:
        raise ValidationError(
            f"Code length must be at least 1 (got {length})", subcategory="LEN"
        )
    limit = get_config().enumeration_cap if cap is None else cap
    total = alpha.size**length
    if total > limit:
        raise EnumerationCapError(
            f"Enumerating {alpha.name} codes of length {length} needs {total} codes "
            f"(~2^{math.log2(total):.1f}), above the cap of {limit}",
            estimate=total,
            cap=limit,
            length=length,
            alphabet=alpha.name,
        )
    return total


def enumerate_codes(
    length: int,
    alphabet: "str | Alphabet" = BINARY,
    bit_duration: float = DEFAULT_BIT_DURATION,
    cap: int | None = None,
) -> Iterator[TimeCode]:
    """Lazily yield all a**L codes in lexicographic (alphabet) order.

    The size check happens when this function is called, before the first
    code is produced.
    """
    alpha = get_alphabet(alphabet)
    total = check_enumeration_size(length, alpha, cap)
    logger.debug(f"Enumerating {total} {alpha.name} codes of length {length}")

    def _generate() -> Iterator[TimeCode]:
        for states in itertools.product(range(alpha.size), repeat=length):
            yield TimeCode(states, bit_duration, alpha)

    return _generate()


def state_index_block(
    length: int, alphabet: "str | Alphabet", start: int, stop: int
) -> np.ndarray:
    """Alphabet indices of codes ``start..stop-1`` in enumeration order.

    Returns an integer array of shape (stop - start, length); row r spells
    code number ``start + r`` with bit 1 as the most significant digit.
    """
    alpha = get_alphabet(alphabet)
    numbers = np.arange(start, stop, dtype=np.int64)
    powers = alpha.size ** np.arange(length - 1, -1, -1, dtype=np.int64)
    return (numbers[:, None] // powers[None, :]) % alpha.size


def code_from_number(
    number: int,
    length: int,
    alphabet: "str | Alphabet" = BINARY,
    bit_duration: float = DEFAULT_BIT_DURATION,
) -> TimeCode:
    """The code at position ``number`` of the enumeration order."""
    alpha = get_alphabet(alphabet)
    row = state_index_block(length, alpha, number, number + 1)[0]
    return TimeCode(tuple(int(i) for i in row), bit_duration, alpha)


@dataclass(frozen=True)
class SpaceTimeCodeMatrix:
    """One time code per surface column, all sharing L and tau."""

    columns: tuple[TimeCode, ...]

    def __post_init__(self) -> None:
        if not self.columns:
            raise ValidationError("A code matrix needs at least one column")
        first = self.columns[0]
        for k, column in enumerate(self.columns):
            if column.length != first.length or not math.isclose(
                column.bit_duration, first.bit_duration, rel_tol=1e-12
            ):
                raise ValidationError(
                    f"Column {k} has L={column.length}, tau={column.bit_duration}; "
                    f"expected L={first.length}, tau={first.bit_duration}",
                    subcategory="LEN",
                )

    @classmethod
    def from_shift(
        cls, base: TimeCode, num_columns: int, shift: int
    ) -> "SpaceTimeCodeMatrix":
        """Column k carries rotate(base, k * shift)."""
        return cls(tuple(rotate(base, k * shift) for k in range(num_columns)))

    @property
    def num_columns(self) -> int:
        return len(self.columns)

    @property
    def length(self) -> int:
        return self.columns[0].length

    @property
    def bit_duration(self) -> float:
        return self.columns[0].bit_duration

    def state_values(self) -> np.ndarray:
        """Complex states as an array of shape (num_columns, L)."""
        return np.stack([c.values for c in self.columns])
