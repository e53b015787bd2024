#!/usr/bin/env python3
"""Command-line front end for the stc-ris toolkit.

Usage:
    stc-ris spectrum --code 00000001 --tau 3.74e-3 --nmax 10 --out spectrum.csv
    stc-ris map --length 11 --harmonic 1 --out map.csv
    stc-ris codebook --scheme qpsk --length 8 --out qpsk.json
    stc-ris steer --shift 2 --length 8 --out pattern.csv
    stc-ris linksim --config stc_ris/configs/qpsk_ideal.json --out run/
    stc-ris export-schedule --codebook qpsk.json --payload DE --out schedule.txt
    stc-ris replay --manifest run/manifest.json

Exit status: 0 on success, 2 on usage or configuration errors, 1 on internal
errors. Diagnostics go to stderr; stdout carries one summary line.
"""

import argparse
import math
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import __version__
from .array import (
    ArrayGeometry,
    SteeringPlan,
    angle_grid,
    find_peak,
    plan_pattern,
    steering_angle,
    write_pattern_csv,
)
from .codebook import (
    Codebook,
    CodebookDocument,
    ModulationScheme,
    design_by_shift,
    leakage_metrics,
    load_codebook,
    map_bits_to_schedule,
    save_codebook,
    search_codebook,
)
from .codes import ALPHABETS, DEFAULT_BIT_DURATION, TimeCode, parse_code, rotate
from .config import get_config
from .error_codes import parse_error_code
from .errors import ConfigurationError, StcError, ValidationError, exit_code_for
from .harmonics import constellation_map, spectrum, write_constellation_csv, write_spectrum_csv
from .linksim.config import LinkConfig, load_link_config
from .linksim.link import build_codebook, run_link
from .linksim.sweep import DEFAULT_SWEEP_ANGLES, angular_sweep, ser_curve, sweep_peak
from .logging import get_run_logger, initialize_logging, logger
from .manifest import RunManifest, load_manifest, manifest_path, write_manifest
from .monitoring.metrics import log_metrics_snapshot
from .utils.common import format_float, parse_payload, write_csv

COLUMN_GROUP = 8


@dataclass
class CommandResult:
    """What a command produced, for the manifest and the summary line."""

    outputs: list[Path]
    summary: str
    directory: bool = False
    seed: int | None = None
    resolved: dict[str, Any] = field(default_factory=dict)


def half_duty_code(length: int) -> str:
    """Default base code: a block of L//2 OFF bits then ON bits."""
    return "0" * (length // 2) + "1" * (length - length // 2)


def _base_code(args: argparse.Namespace) -> TimeCode:
    text = args.base or half_duty_code(args.length)
    code = parse_code(text, args.tau, args.alphabet)
    if code.length != args.length:
        raise ValidationError(
            f"--base has {code.length} bits but --length is {args.length}",
            subcategory="LEN",
        )
    return code


def cmd_spectrum(args: argparse.Namespace) -> CommandResult:
    code = parse_code(args.code, args.tau, args.alphabet)
    points = spectrum(code, args.nmax)
    out = write_spectrum_csv(points, args.out)
    return CommandResult(
        [out],
        f"{len(points)} harmonics, spacing {format_float(1 / code.period)} Hz -> {out}",
    )


def cmd_map(args: argparse.Namespace) -> CommandResult:
    cmap = constellation_map(args.length, args.harmonic, args.alphabet, args.tau)
    out = write_constellation_csv(cmap, args.out)
    return CommandResult([out], f"{len(cmap)} codes (L={args.length}, n={args.harmonic}) -> {out}")


def cmd_codebook(args: argparse.Namespace) -> CommandResult:
    scheme = ModulationScheme.from_name(
        args.scheme, args.harmonic, math.radians(args.offset_deg)
    )
    resolved: dict[str, Any] = {}
    if args.method == "shift":
        base = _base_code(args)
        resolved["base"] = str(base)
        book = design_by_shift(base, scheme)
    else:
        phase_tol = None if args.phase_tol_deg is None else math.radians(args.phase_tol_deg)
        book = search_codebook(
            args.length,
            scheme,
            amp_tol=args.amp_tol,
            phase_tol=phase_tol,
            alphabet=args.alphabet,
            bit_duration=args.tau,
        )
    leakage = leakage_metrics(book)
    out = save_codebook(book, args.out)
    return CommandResult(
        [out],
        f"{scheme.name} codebook L={book.length} n={scheme.harmonic}: "
        f"ring {format_float(book.ring_amplitude)}, "
        f"leakage {format_float(leakage.max_leakage)} "
        f"({len(leakage.flagged)} flagged) -> {out}",
        resolved=resolved,
    )


def cmd_steer(args: argparse.Namespace) -> CommandResult:
    predicted = steering_angle(args.harmonic, args.shift, args.length)
    base = _base_code(args)
    plan = SteeringPlan(base, args.shift, args.harmonic)
    geometry = ArrayGeometry(args.columns, args.spacing, args.rows, args.element_factor)
    pattern = plan_pattern(plan, geometry, angle_grid(args.grid))
    peak_angle, _ = find_peak(pattern)
    out = write_pattern_csv(pattern, args.out)
    note = " (endfire)" if predicted.endfire else ""
    return CommandResult(
        [out],
        f"predicted {predicted.degrees:.2f} deg{note}, pattern peak {peak_angle:.2f} deg -> {out}",
        resolved={"base": str(base)},
    )


def _link_config(args: argparse.Namespace) -> LinkConfig:
    document = getattr(args, "config_document", None)
    if document is not None:
        return LinkConfig.create(**document)
    return load_link_config(args.config)


def _parse_float_list(text: str | None) -> list[float] | None:
    if text is None:
        return None
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise ValidationError(f"Invalid number list {text!r}", subcategory="FMT") from e


def cmd_linksim(args: argparse.Namespace) -> CommandResult:
    cfg = _link_config(args)
    override = get_config().seed_override
    seed = args.seed if args.seed is not None else override if override is not None else cfg.seed
    if seed != cfg.seed:
        cfg = cfg.with_updates(seed=seed)

    out_dir = Path(args.out)
    book = build_codebook(cfg)
    report = run_link(cfg, book)
    outputs = report.write(out_dir)
    outputs.append(save_codebook(book, out_dir / "codebook.json"))

    angles = _parse_float_list(args.angles)
    if angles is None and args.sweep:
        angles = list(DEFAULT_SWEEP_ANGLES)
    summary_extra = ""
    if angles:
        plan = SteeringPlan(book.code_for(0), cfg.modulation.shift, book.scheme.harmonic)
        points = angular_sweep(plan, book, cfg, angles)
        outputs.append(
            write_csv(
                out_dir / "sweep.csv",
                ("label", "angle_deg", "power_db", "evm_pct", "ser"),
                (
                    (
                        p.label,
                        p.angle_deg,
                        p.power_db,
                        "" if p.report is None else float(p.report.evm_pct),
                        "" if p.report is None else float(p.report.ser),
                    )
                    for p in points
                ),
            )
        )
        summary_extra += f", sweep peak {sweep_peak(points):.2f} deg"

    esn0_list = _parse_float_list(args.esn0_list)
    if esn0_list:
        curve = ser_curve(cfg, book, esn0_list, trials=args.trials)
        outputs.append(
            write_csv(
                out_dir / "ser_curve.csv",
                ("esn0_db", "ser", "symbols", "measured_snr_db", "theory_ser"),
                (
                    (
                        p.esn0_db,
                        p.ser,
                        p.symbols,
                        "" if p.measured_snr_db is None else p.measured_snr_db,
                        "" if p.theory_ser is None else p.theory_ser,
                    )
                    for p in curve
                ),
            )
        )

    return CommandResult(
        outputs,
        f"SER {format_float(report.ser)}, EVM {report.evm_pct:.3f}% over "
        f"{report.truth.size} symbols{summary_extra} -> {out_dir}",
        directory=True,
        seed=seed,
        resolved={"config_document": cfg.model_dump(mode="json"), "seed": seed},
    )


def schedule_lines(
    book: Codebook, codes: Sequence[TimeCode], columns: int, shift: int
) -> list[str]:
    """One line per bit interval, one state character per column."""
    chars = book.alphabet.chars
    lines = []
    for code in codes:
        streams = [rotate(code, k * shift).states for k in range(columns)]
        for m in range(code.length):
            row = "".join(chars[stream[m]] for stream in streams)
            groups = [row[i : i + COLUMN_GROUP] for i in range(0, len(row), COLUMN_GROUP)]
            lines.append(" ".join(groups))
    return lines


def cmd_export_schedule(args: argparse.Namespace) -> CommandResult:
    document = getattr(args, "codebook_document", None)
    if document is not None:
        book = CodebookDocument.model_validate(document).to_codebook()
    else:
        book = load_codebook(args.codebook)
    if args.columns < 1:
        raise ValidationError(f"--columns must be >= 1 (got {args.columns})", subcategory="RNG")
    bits = parse_payload(args.payload)
    if not bits:
        raise ValidationError("Payload is empty", subcategory="LEN")
    codes = map_bits_to_schedule(book, bits, args.reps)
    tau = args.tau if args.tau is not None else book.bit_duration
    symbols = len(codes) // args.reps
    header = [
        "# stc-ris schedule",
        f"# tau={format_float(tau)}",
        f"# L={book.length}",
        f"# reps={args.reps}",
        f"# shift={args.shift}",
        f"# columns={args.columns}",
        f"# symbols={symbols}",
    ]
    body = schedule_lines(book, codes, args.columns, args.shift)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(header + body) + "\n", encoding="utf-8")
    return CommandResult(
        [out],
        f"{symbols} symbols, {len(body)} bit intervals, {args.columns} columns -> {out}",
        resolved={
            "codebook_document": CodebookDocument.from_codebook(book).model_dump(mode="json")
        },
    )


def cmd_replay(args: argparse.Namespace) -> CommandResult:
    manifest = load_manifest(args.manifest)
    if manifest.command not in COMMANDS or manifest.command == "replay":
        raise ConfigurationError(
            f"Manifest names unknown command {manifest.command!r}", subcategory="MANI"
        )
    replay_args = dict(manifest.args)
    if args.out is not None:
        replay_args["out"] = args.out
    namespace = argparse.Namespace(command=manifest.command, **replay_args)
    result = _execute(namespace)
    result.summary = f"replayed {manifest.command}: {result.summary}"
    return result


COMMANDS: dict[str, Callable[[argparse.Namespace], CommandResult]] = {
    "spectrum": cmd_spectrum,
    "map": cmd_map,
    "codebook": cmd_codebook,
    "steer": cmd_steer,
    "linksim": cmd_linksim,
    "export-schedule": cmd_export_schedule,
    "replay": cmd_replay,
}


def _execute(args: argparse.Namespace) -> CommandResult:
    """Run one command and write its manifest."""
    result = COMMANDS[args.command](args)
    if args.command == "replay":
        return result
    recorded = {k: v for k, v in vars(args).items() if k != "command"}
    recorded.update(result.resolved)
    location = manifest_path(args.out, result.directory)
    anchor = location.parent
    manifest = RunManifest(
        command=args.command,
        args=recorded,
        seed=result.seed,
        outputs=sorted(_relative(p, anchor) for p in result.outputs),
    )
    write_manifest(manifest, args.out, result.directory)
    return result


def _relative(path: Path, anchor: Path) -> str:
    try:
        return path.resolve().relative_to(anchor.resolve()).as_posix()
    except ValueError:
        return path.as_posix()


def _add_alphabet(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--alphabet", choices=sorted(ALPHABETS), default="binary", help="Cell state set"
    )


def _add_tau(parser: argparse.ArgumentParser, default: float | None = DEFAULT_BIT_DURATION) -> None:
    parser.add_argument("--tau", type=float, default=default, help="Bit duration in seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stc-ris",
        description="Space-time coded RIS simulator and design toolkit",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="Closed-form harmonic spectrum of one code")
    p.add_argument("--code", required=True, help="Code string, bit 1 first")
    _add_tau(p)
    p.add_argument("--nmax", type=int, default=10, help="Highest harmonic order")
    _add_alphabet(p)
    p.add_argument("--out", required=True, help="CSV output path")

    p = sub.add_parser("map", help="Harmonic coefficients of every code of a length")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--harmonic", type=int, default=1)
    _add_alphabet(p)
    _add_tau(p)
    p.add_argument("--out", required=True, help="CSV output path")

    p = sub.add_parser("codebook", help="Design an M-PSK codebook")
    p.add_argument("--scheme", choices=["bpsk", "qpsk", "8psk", "16psk"], required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--harmonic", type=int, default=1)
    p.add_argument("--method", choices=["shift", "search"], default="shift")
    p.add_argument("--base", default=None, help="Base code for --method shift")
    p.add_argument("--offset-deg", type=float, default=0.0, help="Phase of symbol 0")
    p.add_argument("--amp-tol", type=float, default=0.05)
    p.add_argument("--phase-tol-deg", type=float, default=None)
    _add_alphabet(p)
    _add_tau(p)
    p.add_argument("--out", required=True, help="JSON output path")

    p = sub.add_parser("steer", help="Array-factor pattern of a column shift plan")
    p.add_argument("--shift", type=int, required=True, help="Bits of shift per column")
    p.add_argument("--length", type=int, default=8)
    p.add_argument("--harmonic", type=int, default=1)
    p.add_argument("--columns", type=int, default=8)
    p.add_argument("--spacing", type=float, default=0.5, help="Pitch in wavelengths")
    p.add_argument("--rows", type=int, default=1)
    p.add_argument("--element-factor", choices=["isotropic", "cosine"], default="isotropic")
    p.add_argument("--grid", type=float, default=0.1, help="Angle step in degrees")
    p.add_argument("--base", default=None, help="Base code (default half duty)")
    _add_alphabet(p)
    _add_tau(p)
    p.add_argument("--out", required=True, help="CSV output path")

    p = sub.add_parser("linksim", help="Simulate a radio link from a JSON config")
    p.add_argument("--config", required=True, help="LinkConfig JSON path")
    p.add_argument("--out", required=True, help="Output directory")
    p.add_argument("--seed", type=int, default=None, help="Overrides config and STC_SEED")
    p.add_argument("--sweep", action="store_true", help="Sweep the P1..P10 positions")
    p.add_argument("--angles", default=None, help="Comma-separated sweep angles (deg)")
    p.add_argument("--esn0-list", default=None, help="Comma-separated Es/N0 values (dB)")
    p.add_argument("--trials", type=int, default=1, help="Monte Carlo trials per Es/N0")

    p = sub.add_parser("export-schedule", help="Write the per-column switching schedule")
    p.add_argument("--codebook", required=True, help="Codebook JSON path")
    p.add_argument("--payload", required=True, help="Hex payload, or binary with 0b prefix")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--columns", type=int, default=8)
    p.add_argument("--shift", type=int, default=0)
    _add_tau(p, default=None)
    p.add_argument("--out", required=True, help="Schedule text path")

    p = sub.add_parser("replay", help="Regenerate outputs from a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", default=None, help="Write to another location")

    return parser


def describe_error(error: StcError) -> str:
    """Second diagnostic line: the error code, what it denotes and a hint."""
    parsed = parse_error_code(error.error_code)
    kind = (
        f"{parsed['category']} / {parsed['subcategory']}" if parsed else error.category.value
    )
    return f"[{error.error_code}] {kind}. {error.get_user_message()}"


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run one command and return the exit status."""
    args = build_parser().parse_args(argv)
    try:
        config = get_config()
        config.validate()
        initialize_logging()
        run_logger = get_run_logger(args.command)
        run_logger.debug(f"stc-ris {__version__} running {args.command}")
        result = _execute(args)
        log_metrics_snapshot()
    except StcError as e:
        print(f"error: {e.message}", file=sys.stderr)
        print(f"  {describe_error(e)}", file=sys.stderr)
        logger.debug(f"Error detail for {args.command}", extra={"error": e.to_dict()})
        return exit_code_for(e)
    except Exception as e:
        logger.exception(f"Internal error in {args.command}: {e}")
        print(f"internal error: {e}", file=sys.stderr)
        return 1
    print(result.summary)
    return 0


def run_main() -> None:
    """Entry point for the console script."""
    sys.exit(main())


if __name__ == "__main__":
    run_main()
