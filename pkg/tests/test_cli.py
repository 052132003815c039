import numpy as np
import pytest

from nested_mzi_lab import (
    ConfigError,
    default_beam,
    default_grid,
    make_gaussian,
    sample_photons,
)
from nested_mzi_lab.cli import main, parse_config, write_field_csv, write_photons_csv

FAST_CFG = (
    "freq_A=100.0 freq_B=128.0 freq_C=160.0 freq_E=264.0 freq_F=440.0\n"
    "sample_rate=4000.0 duration=0.25\n"
)


def read_rows(path):
    rows = []
    for line in path.read_text().splitlines():
        if line.startswith("#") or "," not in line or line.split(",")[0].isalpha() is None:
            continue
        rows.append(line.split(","))
    return rows[1:]  # drop header


def read_comments(path):
    out = {}
    for line in path.read_text().splitlines():
        if line.startswith("# ") and "=" in line:
            key, value = line[2:].split("=", 1)
            out[key] = value
    return out


class TestParseConfig:
    def test_preset_lookup(self):
        config = parse_config("preset=fig1c command=weak-values")
        assert config.scenario.dove.enabled
        assert config.command == "weak-values"

    def test_ordering_violation(self):
        with pytest.raises(ConfigError, match="z_E"):
            parse_config("command=centroid z_E=0.1 z_A=1.0")

    def test_empty_command(self):
        with pytest.raises(ConfigError, match="command"):
            parse_config("preset=fig1a")

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="waistline"):
            parse_config("command=centroid waistline=3")

    def test_bad_value(self):
        with pytest.raises(ConfigError, match="z_E"):
            parse_config("command=centroid z_E=tall")

    def test_seed_required_for_photons(self):
        with pytest.raises(ConfigError, match="seed"):
            parse_config("command=photons preset=fig1c")

    def test_engine_only_for_centroid(self):
        with pytest.raises(ConfigError, match="engine"):
            parse_config("command=dither engine=analytic")

    def test_later_keys_override_preset(self):
        config = parse_config("preset=fig1c command=centroid alpha_E=1e-6")
        assert config.tilts.alpha_e == 1e-6

    def test_round_trip(self):
        config = parse_config("preset=alt-port command=dither seed=5")
        again = parse_config(config.to_text())
        assert again.scenario == config.scenario
        assert again.tilts == config.tilts
        assert again.protocol == config.protocol
        assert (again.command, again.engine, again.seed) == (
            config.command,
            config.engine,
            config.seed,
        )


class TestCliRuns:
    def test_weak_values_fig1c(self, tmp_path):
        out = tmp_path / "wv"
        assert main(["weak-values", "--preset", "fig1c", "--out", str(out)]) == 0
        text = (out / "weak_values.txt").read_text()
        assert "projector_E = 0+0j" in text
        assert "dove_enabled = true" in text
        rows = {r[0]: r for r in read_rows(out / "weak_values.csv")}
        assert float(rows["E"][3]) == pytest.approx(-2.0, abs=1e-2)
        assert float(rows["E"][1]) == 0.0
        assert (out / "manifest.txt").exists()

    def test_centroid_fig1a_walk_off(self, tmp_path):
        out = tmp_path / "cen"
        assert main(["centroid", "--preset", "fig1a", "--out", str(out)]) == 0
        rows = {r[0]: r for r in read_rows(out / "centroid.csv")}
        assert float(rows["numeric"][1]) == pytest.approx(1.0 * 50e-6, rel=1e-2)

    def test_dither_fig1b_has_no_e_peak(self, tmp_path):
        cfg = tmp_path / "fast.cfg"
        cfg.write_text(FAST_CFG)
        out = tmp_path / "dither"
        code = main(
            ["dither", "--preset", "fig1b", "--config", str(cfg), "--out", str(out)]
        )
        assert code == 0
        notes = read_comments(out / "spectrum.csv")
        assert notes["peaks_over_5x_floor"] == "A,B,C"
        series = np.loadtxt(out / "series.csv", delimiter=",", skiprows=2)
        assert series.shape == (1000, 2)

    def test_photons_command(self, tmp_path):
        cfg = tmp_path / "fast.cfg"
        cfg.write_text(FAST_CFG + "photons_per_sample=100000\n")
        out = tmp_path / "photons"
        code = main(
            [
                "photons", "--preset", "fig1c", "--config", str(cfg),
                "--seed", "7", "--out", str(out),
            ]
        )
        assert code == 0
        notes = read_comments(out / "empirical_spectrum.csv")
        assert "E" in notes["peaks_over_5x_floor"]

    def test_before_f_power_ratio(self, tmp_path):
        out = tmp_path / "bf"
        code = main(
            ["before-F", "--preset", "fig1b", "--out", str(out), "--set", "alpha_E=1e-6"]
        )
        assert code == 0
        notes = read_comments(out / "before_f.csv")
        assert float(notes["power_ratio"]) < 1e-6

    def test_byte_identical_reruns(self, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        args = ["centroid", "--preset", "fig1c", "--seed", "3"]
        assert main(args + ["--out", str(out_a)]) == 0
        assert main(args + ["--out", str(out_b)]) == 0
        assert (out_a / "centroid.csv").read_bytes() == (out_b / "centroid.csv").read_bytes()
        assert (out_a / "manifest.txt").read_bytes() == (out_b / "manifest.txt").read_bytes()

    def test_rerun_from_manifest_reproduces(self, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["centroid", "--preset", "dove-after", "--out", str(out_a)]) == 0
        assert main(
            ["centroid", "--config", str(out_a / "manifest.txt"), "--out", str(out_b)]
        ) == 0
        assert (out_a / "centroid.csv").read_bytes() == (out_b / "centroid.csv").read_bytes()

    def test_outputs_carry_manifest_hash(self, tmp_path):
        out = tmp_path / "cen"
        assert main(["centroid", "--preset", "fig1a", "--out", str(out)]) == 0
        manifest = (out / "manifest.txt").read_text()
        digest = [
            line.split("=", 1)[1]
            for line in manifest.splitlines()
            if line.startswith("# manifest_sha256=")
        ][0]
        first_line = (out / "centroid.csv").read_text().splitlines()[0]
        assert first_line == f"# manifest_sha256={digest}"


class TestExitCodes:
    def test_config_error_is_2(self, tmp_path, capsys):
        assert main(["centroid", "--preset", "fig9z", "--out", str(tmp_path)]) == 2
        err = capsys.readouterr().err
        assert err.startswith("error category=config")
        assert "\n" not in err.strip()

    def test_missing_command_is_2(self, tmp_path):
        assert main(["--out", str(tmp_path)]) == 2

    def test_guard_error_is_3(self, tmp_path, capsys):
        # preset tilt (50 urad) is outside the analytic engine's regime
        code = main(
            ["centroid", "--preset", "fig1c", "--engine", "analytic", "--out", str(tmp_path)]
        )
        assert code == 3
        assert capsys.readouterr().err.startswith("error category=guard")


class TestWriters:
    def test_field_csv_round_trip(self, tmp_path):
        field = make_gaussian(default_beam(), default_grid())
        path = tmp_path / "field.csv"
        write_field_csv(path, field, ["note=1"])
        data = np.loadtxt(path, delimiter=",", skiprows=2)
        assert data.shape == (field.grid.n, 3)
        assert np.allclose(data[:, 0], field.grid.xs)
        assert np.allclose(data[:, 1] + 1j * data[:, 2], field.amplitude)

    def test_photons_csv(self, tmp_path):
        sample = sample_photons(make_gaussian(default_beam(), default_grid()), 50, seed=9)
        path = tmp_path / "photons.csv"
        write_photons_csv(path, sample)
        data = np.loadtxt(path, delimiter=",", skiprows=3)
        assert data.shape == (50,)
        assert np.allclose(data, sample.positions)
