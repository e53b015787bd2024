"""Link configuration documents.

A ``LinkConfig`` describes one simulated measurement: code timing, the
equivalent baseband carrier offset, sampling, reflection states, channel,
surface geometry, receive angle and the modulation to run. Documents are
JSON and validated with pydantic; every construction path that users reach
goes through ``LinkConfig.create`` so invalid settings surface as
``ConfigurationError``.
"""

import math
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..array import ArrayGeometry
from ..codebook import ComplexModel
from ..codes import DEFAULT_BIT_DURATION
from ..errors import ConfigurationError, ResourceNotFoundError
from ..utils.common import dump_json

ChannelKind = Literal["ideal", "awgn", "multipath", "anechoic", "office"]

# Synthetic office profile: tap powers (dB) at delays in bit durations.
OFFICE_TAP_POWERS_DB = (0.0, -6.0, -12.0)
OFFICE_TAP_DELAYS_BITS = (0.0, 0.5, 1.2)


class TapModel(BaseModel):
    """One multipath tap: complex gain and delay in seconds."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    gain: ComplexModel
    delay: float = Field(ge=0)


class ChannelModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ChannelKind = "ideal"
    # None or +inf disables noise.
    esn0_db: float | None = None
    taps: list[TapModel] | None = None

    @model_validator(mode="after")
    def _check_kind(self) -> "ChannelModel":
        if self.kind == "awgn" and self.esn0_db is None:
            raise ValueError("channel kind 'awgn' needs esn0_db")
        if self.kind == "multipath" and not self.taps:
            raise ValueError("channel kind 'multipath' needs a non-empty tap list")
        if self.esn0_db is not None and math.isnan(self.esn0_db):
            raise ValueError("esn0_db must be a number")
        return self

    @property
    def noise_enabled(self) -> bool:
        return self.esn0_db is not None and math.isfinite(self.esn0_db)


class GeometryModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    columns: int = Field(default=8, ge=1)
    spacing: float = Field(default=0.5, gt=0)
    rows: int = Field(default=1, ge=1)
    element_factor: Literal["isotropic", "cosine"] = "isotropic"

    def to_geometry(self) -> ArrayGeometry:
        return ArrayGeometry(self.columns, self.spacing, self.rows, self.element_factor)


class ModulationModel(BaseModel):
    """Which codebook to build and what to transmit."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    scheme: Literal["bpsk", "qpsk", "8psk", "16psk"] = "qpsk"
    harmonic: int = 1
    method: Literal["shift", "search"] = "shift"
    base: str = "00001111"
    alphabet: Literal["binary", "ternary"] = "binary"
    offset_rad: float = 0.0
    amp_tol: float = 0.05
    phase_tol: float | None = None
    # Inter-column shift in bits (beam steering); 0 is broadside.
    shift: int = 0
    num_symbols: int = Field(default=1000, ge=1)
    # Hex payload; overrides num_symbols when set.
    payload_hex: str | None = None


def _complex_pair_default() -> tuple[ComplexModel, ComplexModel]:
    return (ComplexModel(re=0.0, im=0.0), ComplexModel(re=1.0, im=0.0))


class LinkConfig(BaseModel):
    """Validated link configuration.

    Sampling constraints: τ·fs must be an integer (bit edges on samples) of
    at least 8, and fs ≥ 4·(f_offset + 2/(L·τ)).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    L: int = Field(default=8, ge=1)
    tau: float = Field(default=DEFAULT_BIT_DURATION, gt=0)
    f_offset: float = Field(default=500e3, ge=0)
    sample_rate: float = Field(default=2.5e6, gt=0)
    reflection_states: tuple[ComplexModel, ComplexModel] = Field(
        default_factory=_complex_pair_default
    )
    channel: ChannelModel = Field(default_factory=ChannelModel)
    geometry: GeometryModel = Field(default_factory=GeometryModel)
    rx_angle: float = Field(default=0.0, ge=-90, le=90)
    reps: int = Field(default=1, ge=1)
    pilot_count: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0)
    path_gain: ComplexModel = Field(default_factory=lambda: ComplexModel(re=1.0, im=0.0))
    modulation: ModulationModel = Field(default_factory=ModulationModel)

    @model_validator(mode="after")
    def _check_sampling(self) -> "LinkConfig":
        per_bit = self.tau * self.sample_rate
        if abs(per_bit - round(per_bit)) > 1e-6:
            raise ValueError(
                f"tau * sample_rate = {per_bit:.9g} is not an integer number of samples"
            )
        if round(per_bit) < 8:
            raise ValueError(
                f"tau * sample_rate = {per_bit:.9g}; at least 8 samples per bit are needed"
            )
        minimum = 4 * (self.f_offset + 2 / (self.L * self.tau))
        if self.sample_rate < minimum:
            raise ValueError(
                f"sample_rate {self.sample_rate:.9g} Hz violates the Nyquist margin: "
                f"needs >= 4*(f_offset + 2/(L*tau)) = {minimum:.9g} Hz"
            )
        if self.modulation.method == "shift" and len(self.modulation.base) != self.L:
            raise ValueError(
                f"modulation.base has {len(self.modulation.base)} bits but L = {self.L}"
            )
        return self

    @classmethod
    def create(cls, **fields: Any) -> "LinkConfig":
        """Validate keyword fields, raising ConfigurationError on failure."""
        try:
            return cls.model_validate(fields)
        except ValidationError as e:
            raise ConfigurationError(
                f"Invalid link configuration: {e}", subcategory="LINK", original_error=e
            ) from e

    def with_updates(self, **changes: Any) -> "LinkConfig":
        """Copy with top-level fields replaced, validated again."""
        data = self.model_dump()
        data.update(changes)
        return LinkConfig.create(**data)

    @property
    def samples_per_bit(self) -> int:
        return int(round(self.tau * self.sample_rate))

    @property
    def period(self) -> float:
        """Code period T = L·τ (seconds)."""
        return self.L * self.tau

    @property
    def window_samples(self) -> int:
        """Samples per symbol window: reps·L·(τ·fs)."""
        return self.reps * self.L * self.samples_per_bit

    @property
    def gamma_off(self) -> complex:
        return self.reflection_states[0].to_complex()

    @property
    def gamma_on(self) -> complex:
        return self.reflection_states[1].to_complex()

    @property
    def array_geometry(self) -> ArrayGeometry:
        return self.geometry.to_geometry()

    def resolved_taps(self) -> list[tuple[complex, float]]:
        """Multipath taps as (gain, delay s); the office preset is synthetic."""
        if self.channel.taps:
            return [(t.gain.to_complex(), t.delay) for t in self.channel.taps]
        if self.channel.kind == "office":
            return [
                (complex(10 ** (p / 20)), d * self.tau)
                for p, d in zip(OFFICE_TAP_POWERS_DB, OFFICE_TAP_DELAYS_BITS, strict=True)
            ]
        return [(1 + 0j, 0.0)]

    def to_json(self) -> str:
        return dump_json(self.model_dump(mode="json"))


def fast_profile(**overrides: Any) -> LinkConfig:
    """CI-speed profile: f_offset 2 kHz, fs 16 kHz, τ = 1 ms (16 samples/bit)."""
    fields: dict[str, Any] = {"f_offset": 2e3, "sample_rate": 16e3, "tau": 1e-3}
    fields.update(overrides)
    return LinkConfig.create(**fields)


def full_profile(**overrides: Any) -> LinkConfig:
    """Measurement-like profile: 500 kHz offset, τ = 3.74 ms, fs = 2.5 MHz."""
    fields: dict[str, Any] = {
        "f_offset": 500e3,
        "sample_rate": 2.5e6,
        "tau": DEFAULT_BIT_DURATION,
    }
    fields.update(overrides)
    return LinkConfig.create(**fields)


def load_link_config(path: str | Path) -> LinkConfig:
    """Read a LinkConfig JSON document."""
    source = Path(path)
    if not source.is_file():
        raise ResourceNotFoundError(f"Config file not found: {source}", path=str(source))
    try:
        return LinkConfig.model_validate_json(source.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise ConfigurationError(
            f"Invalid link configuration {source}: {e}",
            subcategory="LINK",
            original_error=e,
        ) from e
