"""Run manifests: enough to regenerate a command's outputs byte for byte."""

from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from . import __version__
from .errors import ConfigurationError, ResourceNotFoundError
from .utils.common import write_json

MANIFEST_NAME = "manifest.json"


class RunManifest(BaseModel):
    """Command, fully materialized arguments, tool version, seed and outputs.

    No timestamps are recorded, so replaying a manifest reproduces it too.
    """

    model_config = ConfigDict(extra="forbid")

    command: str
    args: dict[str, Any]
    tool_version: str = __version__
    seed: int | None = None
    outputs: list[str] = Field(default_factory=list)


def manifest_path(out: str | Path, directory: bool) -> Path:
    """``<dir>/manifest.json`` for directory outputs, ``<file>.manifest.json`` otherwise."""
    target = Path(out)
    if directory:
        return target / MANIFEST_NAME
    return target.with_name(target.name + ".manifest.json")


def write_manifest(manifest: RunManifest, out: str | Path, directory: bool) -> Path:
    return write_json(manifest_path(out, directory), manifest.model_dump(mode="json"))


def load_manifest(path: str | Path) -> RunManifest:
    source = Path(path)
    if not source.is_file():
        raise ResourceNotFoundError(f"Manifest not found: {source}", path=str(source))
    try:
        return RunManifest.model_validate_json(source.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise ConfigurationError(
            f"Invalid manifest {source}: {e}", subcategory="MANI", original_error=e
        ) from e
