# stc_ris/error_codes.py
"""Error code definitions for the stc-ris toolkit.

Error codes are structured to provide information about the error category,
subcategory, and specific error.

Format: {PREFIX}_{SUBCAT}_{IDENTIFIER}
- PREFIX: 2-6 letter code representing the error category (e.g., VAL for validation)
- SUBCAT: 2-4 letter code representing the error subcategory (e.g., FMT for format)
- IDENTIFIER: Unique identifier for the specific error (a 4-character UUID prefix)

Example: VAL_FMT_a1b2 - validation error with format subcategory
"""

# Category prefixes mapping from enum values to code prefixes
CATEGORY_PREFIXES = {
    "configuration": "CONFIG",
    "not_found": "NF",
    "validation": "VAL",
    "capacity": "CAP",
    "design": "DSN",
    "signal": "SIG",
    "internal": "INT",
    "unknown": "UNK",
}

# Reverse mapping for display purposes
CATEGORY_DISPLAY_NAMES = {
    "CONFIG": "Configuration",
    "NF": "Not Found",
    "VAL": "Validation",
    "CAP": "Capacity",
    "DSN": "Design",
    "SIG": "Signal",
    "INT": "Internal",
    "UNK": "Unknown",
}

SUBCATEGORY_CODES = {
    # Configuration subcategories
    "CONFIG_ENV": "Environment configuration error",
    "CONFIG_LINK": "Invalid link configuration",
    "CONFIG_MANI": "Invalid run manifest",
    "CONFIG_GEN": "General configuration error",
    # Not Found subcategories
    "NF_FILE": "File not found",
    # Validation subcategories
    "VAL_FMT": "Invalid format",
    "VAL_RNG": "Value out of range",
    "VAL_LEN": "Invalid length",
    "VAL_COD": "Invalid code",
    "VAL_GEN": "General validation error",
    # Capacity subcategories
    "CAP_ENUM": "Enumeration cap exceeded",
    # Design subcategories
    "DSN_SHFT": "Scheme unreachable by shifts",
    "DSN_RING": "No feasible constellation ring",
    "DSN_EVAN": "Evanescent steering request",
    "DSN_ZERO": "Base code has no harmonic content",
    "DSN_GEN": "General design error",
    # Signal subcategories
    "SIG_PLT": "Pilot unusable",
    "SIG_WIN": "Window and sample mismatch",
    "SIG_SHRT": "Record shorter than one period",
    "SIG_GEN": "General signal error",
    # Internal subcategories
    "INT_UNH": "Unhandled error",
    "INT_GEN": "Internal error",
    # Unknown subcategories
    "UNK_GEN": "General error",
}

def parse_error_code(code: str) -> dict[str, str] | None:
    """Parse an error code into its components.

    Args:
        code: The error code to parse

    Returns:
        Dictionary with category, subcategory, and identifier,
        or None if the code doesn't match the expected format
    """
    parts = code.split("_")
    if len(parts) < 3:
        return None

    category_prefix = parts[0]
    subcategory = f"{category_prefix}_{parts[1]}"
    identifier = parts[2]

    if (
        category_prefix not in CATEGORY_DISPLAY_NAMES
        or subcategory not in SUBCATEGORY_CODES
    ):
        return None

    return {
        "category": CATEGORY_DISPLAY_NAMES[category_prefix],
        "subcategory": SUBCATEGORY_CODES[subcategory],
        "identifier": identifier,
        "full_code": code,
    }


def format_error_code(category_prefix: str, subcategory: str, identifier: str) -> str:
    """Format components into a standard error code.

    Args:
        category_prefix: The category prefix (e.g., 'VAL')
        subcategory: The subcategory code (e.g., 'FMT')
        identifier: Unique identifier

    Returns:
        Formatted error code
    """
    return f"{category_prefix}_{subcategory}_{identifier}"
