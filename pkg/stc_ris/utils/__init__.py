"""Utils package for the stc-ris toolkit."""

from .common import (
    format_float,
    gray_decode,
    gray_encode,
    hex_to_bits,
    parse_bits,
    parse_payload,
    write_csv,
    write_json,
)

__all__ = [
    "format_float",
    "gray_decode",
    "gray_encode",
    "hex_to_bits",
    "parse_bits",
    "parse_payload",
    "write_csv",
    "write_json",
]
