"""Common utility functions shared across the stc-ris toolkit.

Output formatting (CSV/JSON written the same way by every command) and the
bit-string helpers used by codebook mapping and schedule export.
"""

import json
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

from ..errors import ValidationError

FLOAT_FORMAT = "%.12g"


def format_float(value: float) -> str:
    """Format a float with 12 significant digits."""
    return FLOAT_FORMAT % value


def _format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def write_csv(
    path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]
) -> Path:
    """Write a CSV file with a mandatory header row and ``\\n`` line endings.

    Args:
        path: Destination file
        header: Column names
        rows: Row values; floats are printed with 12 significant digits

    Returns:
        The path written
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(_format_cell(v) for v in row) + "\n")
    return target


def dump_json(data: Any) -> str:
    """Serialize to the canonical JSON text used for every output file."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def write_json(path: str | Path, data: Any) -> Path:
    """Write canonical JSON (indent 2, sorted keys, trailing newline)."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dump_json(data), encoding="utf-8")
    return target


def parse_bits(text: str) -> list[int]:
    """Parse a payload bit string; spaces and underscores are ignored.

    Raises:
        ValidationError: on any character other than 0/1
    """
    bits = []
    for position, char in enumerate(text, start=1):
        if char in " _":
            continue
        if char not in "01":
            raise ValidationError(
                f"Invalid payload character {char!r} at position {position}",
                subcategory="FMT",
                position=position,
            )
        bits.append(int(char))
    return bits


def hex_to_bits(text: str) -> list[int]:
    """Expand a hex string to bits, most significant bit of each digit first."""
    cleaned = text.strip()
    if cleaned.lower().startswith("0x"):
        cleaned = cleaned[2:]
    bits = []
    for position, char in enumerate(cleaned, start=1):
        try:
            value = int(char, 16)
        except ValueError:
            raise ValidationError(
                f"Invalid hex digit {char!r} at position {position}",
                subcategory="FMT",
                position=position,
            ) from None
        bits.extend((value >> shift) & 1 for shift in (3, 2, 1, 0))
    return bits


def gray_encode(value: int) -> int:
    """Binary-reflected Gray code of a non-negative integer."""
    return value ^ (value >> 1)


def gray_decode(value: int) -> int:
    """Inverse of ``gray_encode``."""
    result = value
    shift = value >> 1
    while shift:
        result ^= shift
        shift >>= 1
    return result


def bits_to_int(bits: Sequence[int]) -> int:
    """Most-significant-first bit group to integer."""
    value = 0
    for bit in bits:
        value = (value << 1) | int(bit)
    return value


def parse_payload(text: str) -> list[int]:
    """Payload bits from hex (``DE``, ``0xDE``) or binary with a ``0b`` prefix."""
    cleaned = text.strip()
    if cleaned.lower().startswith("0b"):
        return parse_bits(cleaned[2:])
    return hex_to_bits(cleaned)
