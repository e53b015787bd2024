"""Tests for the stc-ris command-line interface."""

import json
import re

import pytest

from stc_ris import __version__
from stc_ris.cli import build_parser, half_duty_code, main

OUTPUT_FILES = ["codebook.json", "constellation.csv", "report.json", "spectrum.csv"]


@pytest.fixture(autouse=True)
def work_in_tmp(tmp_path, monkeypatch):
    """Run every command from a scratch directory."""
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def qpsk_codebook_file(tmp_path, capsys):
    path = tmp_path / "qpsk.json"
    assert main(["codebook", "--scheme", "qpsk", "--length", "8", "--out", str(path)]) == 0
    return path


def _schedule(tmp_path, book, payload, *extra):
    out = tmp_path / "schedule.txt"
    code = main(
        [
            "export-schedule",
            "--codebook",
            str(book),
            "--payload",
            payload,
            "--out",
            str(out),
            *extra,
        ]
    )
    return code, out


class TestParser:
    """Tests for argument parsing."""

    def test_version(self, capsys):
        """Test that --version prints the package version and exits 0."""
        with pytest.raises(SystemExit) as excinfo:
            build_parser().parse_args(["--version"])
        assert excinfo.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_command_is_required(self):
        """Test that running without a subcommand is a usage error."""
        with pytest.raises(SystemExit) as excinfo:
            build_parser().parse_args([])
        assert excinfo.value.code == 2

    def test_half_duty_code(self):
        """Test the default base code: the first half OFF, the rest ON."""
        assert half_duty_code(8) == "00001111"
        assert half_duty_code(5) == "00111"


class TestSpectrumCommand:
    """Tests for ``stc-ris spectrum``."""

    def test_writes_csv_and_manifest(self, tmp_path, capsys):
        """Test that spectrum writes its CSV, a summary line and a manifest."""
        out = tmp_path / "spectrum.csv"
        args = ["spectrum", "--code", "00000001", "--tau", "3.74e-3", "--nmax", "10"]
        assert main([*args, "--out", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 22
        assert "21 harmonics" in capsys.readouterr().out
        manifest = json.loads((tmp_path / "spectrum.csv.manifest.json").read_text())
        assert manifest["command"] == "spectrum"
        assert manifest["outputs"] == ["spectrum.csv"]
        assert manifest["tool_version"] == __version__

    def test_bad_code_exits_two(self, tmp_path, capsys):
        """Test that an invalid code exits 2 without writing output."""
        code = main(["spectrum", "--code", "2xyz", "--out", str(tmp_path / "s.csv")])
        assert code == 2
        assert "error: " in capsys.readouterr().err
        assert not (tmp_path / "s.csv").exists()

    def test_unexpected_failure_exits_one(self, tmp_path, capsys, mocker):
        """Test that an unexpected exception exits 1 as an internal error."""
        mocker.patch("stc_ris.cli.spectrum", side_effect=RuntimeError("boom"))
        code = main(["spectrum", "--code", "01", "--out", str(tmp_path / "s.csv")])
        assert code == 1
        assert "internal error: boom" in capsys.readouterr().err

    def test_malformed_environment_exits_two(self, tmp_path, capsys, reload_config):
        """Test that a non-numeric STC_SEED is reported as a configuration error."""
        reload_config(STC_SEED="abc")
        code = main(["spectrum", "--code", "0101", "--out", str(tmp_path / "s.csv")])
        assert code == 2
        err = capsys.readouterr().err
        assert "error: STC_SEED must be a number" in err
        assert "[CONFIG_ENV_" in err
        assert "Configuration / Environment configuration error" in err
        assert not (tmp_path / "s.csv").exists()


class TestMapCommand:
    """Tests for ``stc-ris map``."""

    def test_eleven_bit_map(self, tmp_path):
        """Test that the 11-bit map has one row per code."""
        out = tmp_path / "map.csv"
        assert main(["map", "--length", "11", "--out", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 2049

    def test_enumeration_cap(self, tmp_path):
        """Test that a map beyond the enumeration cap exits 2."""
        assert main(["map", "--length", "30", "--out", str(tmp_path / "m.csv")]) == 2


class TestCodebookCommand:
    """Tests for ``stc-ris codebook``."""

    def test_qpsk(self, qpsk_codebook_file, capsys):
        """Test the QPSK codebook file, its manifest and the summary line."""
        document = json.loads(qpsk_codebook_file.read_text())
        assert [e["code"] for e in document["entries"]] == [
            "11000011",
            "00001111",
            "00111100",
            "11110000",
        ]
        manifest = json.loads(
            qpsk_codebook_file.with_name("qpsk.json.manifest.json").read_text()
        )
        assert manifest["args"]["base"] == "00001111"
        assert "qpsk codebook L=8" in capsys.readouterr().out

    def test_infeasible_shift_design(self, tmp_path, capsys):
        """Test that an unreachable shift design exits 2 with a described error code."""
        out = tmp_path / "book.json"
        code = main(["codebook", "--scheme", "16psk", "--length", "4", "--out", str(out)])
        assert code == 2
        err = capsys.readouterr().err
        assert "unreachable" in err
        assert "Design / Scheme unreachable by shifts. The requested design cannot be realized." in err

    def test_sixteen_psk_on_sixteen_bits(self, tmp_path):
        """Test that 16-PSK is built by shifts from a 16-bit base."""
        out = tmp_path / "book.json"
        assert main(["codebook", "--scheme", "16psk", "--length", "16", "--out", str(out)]) == 0
        assert len(json.loads(out.read_text())["entries"]) == 16

    def test_base_length_mismatch(self, tmp_path):
        """Test that a base code of the wrong length exits 2."""
        args = ["codebook", "--scheme", "qpsk", "--length", "8", "--base", "0011"]
        assert main([*args, "--out", str(tmp_path / "b.json")]) == 2


class TestSteerCommand:
    """Tests for ``stc-ris steer``."""

    def test_one_bit_shift(self, tmp_path, capsys):
        """Test the predicted angle and pattern size for a one-bit shift."""
        out = tmp_path / "pattern.csv"
        assert main(["steer", "--shift", "1", "--out", str(out)]) == 0
        assert "predicted 14.48 deg" in capsys.readouterr().out
        assert len(out.read_text().splitlines()) == 1802

    def test_endfire_is_reported(self, tmp_path, capsys):
        """Test that an endfire prediction is marked in the summary."""
        assert main(["steer", "--shift", "4", "--out", str(tmp_path / "p.csv")]) == 0
        assert "(endfire)" in capsys.readouterr().out

    def test_evanescent_exits_two(self, tmp_path, capsys):
        """Test that an evanescent shift exits 2 without writing a pattern."""
        out = tmp_path / "p.csv"
        assert main(["steer", "--shift", "5", "--out", str(out)]) == 2
        assert "evanescent" in capsys.readouterr().err
        assert not out.exists()

    def test_grid_step_that_misses_endpoints_exits_two(self, tmp_path, capsys):
        """Test that a grid step that does not divide the span exits 2."""
        out = tmp_path / "p.csv"
        assert main(["steer", "--shift", "1", "--grid", "0.7", "--out", str(out)]) == 2
        assert "does not divide" in capsys.readouterr().err
        assert not out.exists()


@pytest.mark.integration
class TestLinksimCommand:
    """Tests for ``stc-ris linksim`` and replay."""

    def test_ideal_qpsk(self, tmp_path, bundled_config, capsys):
        """Test an error-free QPSK link run, its report and its manifest."""
        out = tmp_path / "run"
        config = str(bundled_config("qpsk_ideal.json"))
        assert main(["linksim", "--config", config, "--out", str(out)]) == 0
        assert capsys.readouterr().out.startswith("SER 0,")
        report = json.loads((out / "report.json").read_text())
        assert report["ser"] == 0
        assert report["symbols"] == 1000
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["outputs"] == OUTPUT_FILES
        assert manifest["seed"] == 1234
        assert manifest["args"]["config_document"]["modulation"]["scheme"] == "qpsk"

    def test_replay_reproduces_outputs(self, tmp_path, bundled_config):
        """Test that replaying a noisy run reproduces every output byte for byte."""
        first = tmp_path / "first"
        config = str(bundled_config("qpsk_awgn15.json"))
        assert main(["linksim", "--config", config, "--out", str(first)]) == 0
        second = tmp_path / "second"
        manifest = first / "manifest.json"
        assert main(["replay", "--manifest", str(manifest), "--out", str(second)]) == 0
        for name in OUTPUT_FILES:
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_replay_in_place_keeps_manifest(self, tmp_path, bundled_config):
        """Test that replaying into the original directory leaves the manifest unchanged."""
        out = tmp_path / "run"
        config = str(bundled_config("qpsk_ideal.json"))
        assert main(["linksim", "--config", config, "--out", str(out)]) == 0
        manifest = out / "manifest.json"
        before = manifest.read_bytes()
        assert main(["replay", "--manifest", str(manifest)]) == 0
        assert manifest.read_bytes() == before

    def test_replay_survives_a_deleted_config(self, tmp_path):
        """Test that replay works from the embedded config after the file is gone."""
        config = tmp_path / "link.json"
        config.write_text(
            json.dumps(
                {
                    "f_offset": 2000.0,
                    "sample_rate": 16000.0,
                    "tau": 0.001,
                    "modulation": {"num_symbols": 20},
                }
            )
        )
        out = tmp_path / "run"
        assert main(["linksim", "--config", str(config), "--out", str(out)]) == 0
        config.unlink()
        replayed = tmp_path / "again"
        manifest = str(out / "manifest.json")
        assert main(["replay", "--manifest", manifest, "--out", str(replayed)]) == 0
        assert (replayed / "report.json").read_bytes() == (out / "report.json").read_bytes()

    def test_noisy_runs_are_deterministic(self, tmp_path, bundled_config):
        """Test that two noisy runs with one seed give identical reports."""
        config = str(bundled_config("qpsk_awgn15.json"))
        assert main(["linksim", "--config", config, "--out", str(tmp_path / "a")]) == 0
        assert main(["linksim", "--config", config, "--out", str(tmp_path / "b")]) == 0
        assert (tmp_path / "a" / "report.json").read_bytes() == (
            tmp_path / "b" / "report.json"
        ).read_bytes()

    def test_missing_config(self, tmp_path, capsys):
        """Test that a missing link config exits 2."""
        args = ["linksim", "--config", str(tmp_path / "none.json"), "--out", str(tmp_path)]
        assert main(args) == 2
        assert "not found" in capsys.readouterr().err

    def test_seed_precedence(self, tmp_path, bundled_config, reload_config):
        """Test that --seed overrides STC_SEED, which overrides the config seed."""
        config = str(bundled_config("qpsk_awgn15.json"))
        reload_config(STC_SEED=7)
        assert main(["linksim", "--config", config, "--out", str(tmp_path / "env")]) == 0
        env_manifest = json.loads((tmp_path / "env" / "manifest.json").read_text())
        assert env_manifest["seed"] == 7
        cli_args = ["linksim", "--config", config, "--seed", "9", "--out", str(tmp_path / "cli")]
        assert main(cli_args) == 0
        cli_manifest = json.loads((tmp_path / "cli" / "manifest.json").read_text())
        assert cli_manifest["seed"] == 9

    def test_angle_sweep(self, tmp_path, bundled_config, capsys):
        """Test the sweep CSV and the reported sweep peak."""
        out = tmp_path / "sweep"
        config = str(bundled_config("qpsk_steer30.json"))
        args = ["linksim", "--config", config, "--angles", "0,30,60", "--out", str(out)]
        assert main(args) == 0
        assert "sweep peak 30.00 deg" in capsys.readouterr().out
        lines = (out / "sweep.csv").read_text().splitlines()
        assert lines[0] == "label,angle_deg,power_db,evm_pct,ser"
        assert len(lines) == 4
        assert lines[1].startswith("P1,0,")
        assert lines[1].endswith(",,")
        assert lines[2].startswith("P2,30,0,")

    def test_ser_curve(self, tmp_path, bundled_config):
        """Test the SER curve CSV over two Es/N0 points."""
        out = tmp_path / "curve"
        config = str(bundled_config("qpsk_ideal.json"))
        args = ["linksim", "--config", config, "--esn0-list", "6,12", "--out", str(out)]
        assert main(args) == 0
        lines = (out / "ser_curve.csv").read_text().splitlines()
        assert lines[0] == "esn0_db,ser,symbols,measured_snr_db,theory_ser"
        assert len(lines) == 3
        assert lines[1].startswith("6,")

    def test_bad_angle_list(self, tmp_path, bundled_config):
        """Test that a non-numeric angle list exits 2."""
        config = str(bundled_config("qpsk_ideal.json"))
        args = ["linksim", "--config", config, "--angles", "a,b", "--out", str(tmp_path / "x")]
        assert main(args) == 2


class TestExportScheduleCommand:
    """Tests for ``stc-ris export-schedule``."""

    def test_header_and_body(self, tmp_path, qpsk_codebook_file):
        """Test the schedule header and one row per bit slot."""
        code, out = _schedule(tmp_path, qpsk_codebook_file, "DE")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[:7] == [
            "# stc-ris schedule",
            "# tau=0.00374",
            "# L=8",
            "# reps=1",
            "# shift=0",
            "# columns=8",
            "# symbols=4",
        ]
        body = lines[7:]
        assert len(body) == 32
        # Symbol 2 is 00111100: every column plays it unshifted.
        assert body[:8] == [s * 8 for s in "00111100"]

    def test_shifted_columns_are_rotations(self, tmp_path, qpsk_codebook_file):
        """Test that column k of a shifted schedule is column 0 rotated by k."""
        code, out = _schedule(tmp_path, qpsk_codebook_file, "DE", "--shift", "1")
        assert code == 0
        rows = out.read_text().splitlines()[7:15]
        for m in range(8):
            for k in range(8):
                assert rows[m][k] == rows[(m + k) % 8][0]

    def test_column_grouping(self, tmp_path, qpsk_codebook_file):
        """Test that rows are split into groups of eight columns."""
        code, out = _schedule(tmp_path, qpsk_codebook_file, "DE", "--columns", "10")
        assert code == 0
        assert re.fullmatch(r"[01]{8} [01]{2}", out.read_text().splitlines()[7])

    def test_repetitions_and_tau_override(self, tmp_path, qpsk_codebook_file):
        """Test that --reps repeats symbols and --tau overrides the header."""
        code, out = _schedule(
            tmp_path, qpsk_codebook_file, "0b00011110", "--reps", "2", "--tau", "1e-3"
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert "# tau=0.001" in lines
        assert "# symbols=4" in lines
        assert len(lines) == 7 + 64

    def test_odd_payload_for_qpsk(self, tmp_path, qpsk_codebook_file):
        """Test that a payload with an odd bit count exits 2 for QPSK."""
        code, _ = _schedule(tmp_path, qpsk_codebook_file, "0b101")
        assert code == 2

    def test_missing_codebook(self, tmp_path):
        """Test that a missing codebook exits 2."""
        code, _ = _schedule(tmp_path, tmp_path / "absent.json", "DE")
        assert code == 2


class TestReplayCommand:
    """Tests for ``stc-ris replay``."""

    def test_missing_manifest(self, tmp_path, capsys):
        """Test that replaying a missing manifest exits 2."""
        assert main(["replay", "--manifest", str(tmp_path / "manifest.json")]) == 2
        assert "Manifest not found" in capsys.readouterr().err

    def test_replays_a_file_command(self, tmp_path):
        """Test that replaying spectrum to a new path reproduces the CSV."""
        out = tmp_path / "spectrum.csv"
        assert main(["spectrum", "--code", "0101", "--nmax", "3", "--out", str(out)]) == 0
        copy = tmp_path / "copy.csv"
        manifest = str(tmp_path / "spectrum.csv.manifest.json")
        assert main(["replay", "--manifest", manifest, "--out", str(copy)]) == 0
        assert copy.read_bytes() == out.read_bytes()

    def test_unknown_command_in_manifest(self, tmp_path):
        """Test that a manifest naming an unknown command exits 2."""
        manifest = tmp_path / "m.json"
        manifest.write_text(json.dumps({"command": "fly", "args": {}}))
        assert main(["replay", "--manifest", str(manifest)]) == 2
