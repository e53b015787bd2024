"""Column-wise space-time coded array: steering law and array factor.

Column k of an N-column surface with pitch d (in wavelengths) radiates
toward θ with spatial phase exp(−j2π·d·k·sinθ). With an s-bit shift per
column the harmonic-n coefficients ramp by exp(+j2πnsk/L), so the main lobe
sits at arcsin(2ns/L) for d = 0.5.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, NamedTuple

import numpy as np

from .codes import SpaceTimeCodeMatrix, TimeCode, format_code
from .errors import EvanescentSteeringError, ValidationError
from .harmonics import harmonic_coefficient
from .logging import get_logger
from .utils.common import write_csv

logger = get_logger("array")

# Floor for normalized patterns; exact nulls would otherwise be −inf.
DB_FLOOR = -300.0

ElementFactor = Literal["isotropic", "cosine"]


@dataclass(frozen=True)
class ArrayGeometry:
    """Surface geometry: N columns at pitch d wavelengths, identical rows."""

    num_columns: int = 8
    spacing: float = 0.5
    rows: int = 1
    element_factor: ElementFactor = "isotropic"

    def __post_init__(self) -> None:
        if self.num_columns < 1:
            raise ValidationError(
                f"num_columns must be >= 1 (got {self.num_columns})", subcategory="RNG"
            )
        if not self.spacing > 0:
            raise ValidationError(
                f"spacing must be positive (got {self.spacing})", subcategory="RNG"
            )
        if self.rows < 1:
            raise ValidationError(f"rows must be >= 1 (got {self.rows})", subcategory="RNG")
        if self.element_factor not in ("isotropic", "cosine"):
            raise ValidationError(
                f"element_factor must be 'isotropic' or 'cosine' "
                f"(got {self.element_factor!r})",
                subcategory="FMT",
            )

    def spatial_phasors(self, theta_deg: "float | np.ndarray") -> np.ndarray:
        """exp(−j2π·d·k·sinθ), shape (len(θ), N) (or (N,) for a scalar θ)."""
        sin_theta = np.sin(np.radians(theta_deg))
        k = np.arange(self.num_columns)
        return np.exp(-2j * np.pi * self.spacing * np.multiply.outer(sin_theta, k))

    def element_gain(self, theta_deg: "float | np.ndarray") -> "float | np.ndarray":
        """Amplitude gain of one column toward θ, including the row count."""
        if self.element_factor == "cosine":
            return self.rows * np.cos(np.radians(theta_deg))
        return self.rows * np.ones_like(np.asarray(theta_deg, dtype=float))


@dataclass(frozen=True)
class SteeringPlan:
    """Column k carries rotate(base, k·shift); the pattern is read at ``harmonic``."""

    base: TimeCode
    shift: int
    harmonic: int = 1

    def code_matrix(self, num_columns: int) -> SpaceTimeCodeMatrix:
        return SpaceTimeCodeMatrix.from_shift(self.base, num_columns, self.shift)


class SteeringAngle(NamedTuple):
    degrees: float
    endfire: bool


def steering_angle(n: int, s: int, L: int) -> SteeringAngle:
    """Main-lobe direction arcsin(2ns/L) in degrees.

    Raises:
        EvanescentSteeringError: when |2ns/L| > 1
    """
    if L < 1:
        raise ValidationError(f"Code length must be >= 1 (got {L})", subcategory="LEN")
    numerator = 2 * n * s
    if abs(numerator) > L:
        raise EvanescentSteeringError(
            f"evanescent: no real steering angle (2ns/L = {numerator / L:.6g})",
            harmonic=n,
            shift=s,
            length=L,
        )
    if abs(numerator) == L:
        degrees = math.copysign(90.0, numerator)
        logger.warning(
            f"Endfire steering for n={n}, s={s}, L={L}: the main lobe lies at "
            f"{degrees:+.0f}° and the pattern there is not a physical main lobe"
        )
        return SteeringAngle(degrees, True)
    return SteeringAngle(math.degrees(math.asin(numerator / L)), False)


def column_coefficients(plan: SteeringPlan, num_columns: int) -> np.ndarray:
    """Harmonic coefficient of every column, computed from the rotated codes."""
    matrix = plan.code_matrix(num_columns)
    coefficients = np.array(
        [harmonic_coefficient(code, plan.harmonic) for code in matrix.columns],
        dtype=complex,
    )
    if abs(coefficients[0]) == 0:
        logger.warning(
            f"Base code {format_code(plan.base)} has no harmonic-{plan.harmonic} "
            f"content; the pattern is identically zero"
        )
    return coefficients


def angle_grid(step: float = 0.1, limit: float = 90.0) -> np.ndarray:
    """Symmetric grid from −limit to +limit (inclusive) with exactly the given step.

    Raises:
        ValidationError: when the step is not positive or does not divide 2·limit
    """
    if not step > 0:
        raise ValidationError(f"Grid step must be positive (got {step})", subcategory="RNG")
    intervals = 2 * limit / step
    count = int(round(intervals))
    if count < 1 or abs(intervals - count) > 1e-9 * max(1.0, intervals):
        raise ValidationError(
            f"Grid step {step} does not divide the span [-{limit}, {limit}]",
            subcategory="RNG",
        )
    return np.linspace(-limit, limit, count + 1)


def to_db(magnitude: np.ndarray) -> np.ndarray:
    """20·log10 normalized to the maximum, floored at ``DB_FLOOR``."""
    peak = float(np.max(magnitude)) if magnitude.size else 0.0
    if peak <= 0:
        return np.full(magnitude.shape, DB_FLOOR)
    with np.errstate(divide="ignore"):
        db = 20 * np.log10(magnitude / peak)
    return np.maximum(db, DB_FLOOR)


@dataclass(frozen=True)
class Pattern:
    """Far-field pattern on an angle grid."""

    angles_deg: np.ndarray
    values: np.ndarray

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def magnitude_db(self) -> np.ndarray:
        """Magnitude in dB, 0 dB at the maximum."""
        return to_db(self.magnitude)


def array_factor(
    coeffs: "np.ndarray | list[complex]",
    geom: ArrayGeometry,
    grid: "np.ndarray | list[float]",
) -> Pattern:
    """AF(θ) = g(θ)·Σ_k coeff_k·exp(−j2π·d·k·sinθ), g the element gain."""
    coefficients = np.asarray(coeffs, dtype=complex)
    angles = np.asarray(grid, dtype=float)
    if coefficients.size == 0:
        raise ValidationError("Coefficient list is empty", subcategory="LEN")
    if coefficients.size != geom.num_columns:
        raise ValidationError(
            f"{coefficients.size} coefficients for {geom.num_columns} columns",
            subcategory="LEN",
        )
    if angles.size < 2:
        raise ValidationError("Angle grid needs at least 2 samples", subcategory="LEN")
    if np.any(np.abs(angles) > 90):
        raise ValidationError("Angle grid must lie within [−90°, 90°]", subcategory="RNG")

    values = geom.element_gain(angles) * (geom.spatial_phasors(angles) @ coefficients)
    return Pattern(angles, values)


def find_peak(pattern: Pattern) -> tuple[float, float]:
    """Peak angle (degrees) and normalized level (dB) of a pattern.

    Equal maxima resolve to the smallest |angle|, then the smallest angle.
    The grid maximum is refined by a parabola through the three samples
    around it when both neighbours are strictly lower.
    """
    angles = pattern.angles_deg
    magnitude = pattern.magnitude
    if angles.size == 0:
        raise ValidationError("Pattern is empty", subcategory="LEN")
    top = float(np.max(magnitude))
    ties = np.flatnonzero(magnitude >= top * (1 - 1e-12))
    i = int(min(ties, key=lambda j: (abs(angles[j]), angles[j])))

    db = pattern.magnitude_db
    if 0 < i < angles.size - 1 and magnitude[i - 1] < magnitude[i] > magnitude[i + 1]:
        left, centre, right = db[i - 1], db[i], db[i + 1]
        curvature = left - 2 * centre + right
        if curvature < 0:
            offset = 0.5 * (left - right) / curvature
            step = 0.5 * (angles[i + 1] - angles[i - 1])
            return (
                float(angles[i] + offset * step),
                float(centre - 0.25 * (left - right) * offset),
            )
    return float(angles[i]), float(db[i])


def plan_pattern(
    plan: SteeringPlan, geom: ArrayGeometry, grid: "np.ndarray | None" = None
) -> Pattern:
    """Array factor of a steering plan on ``grid`` (default 0.1° steps)."""
    angles = angle_grid() if grid is None else grid
    return array_factor(column_coefficients(plan, geom.num_columns), geom, angles)


def write_pattern_csv(pattern: Pattern, path: str | Path) -> Path:
    """Columns ``theta_deg,re,im,mag_db``."""
    rows = zip(
        pattern.angles_deg.tolist(),
        pattern.values.real.tolist(),
        pattern.values.imag.tolist(),
        pattern.magnitude_db.tolist(),
        strict=True,
    )
    return write_csv(path, ("theta_deg", "re", "im", "mag_db"), rows)
