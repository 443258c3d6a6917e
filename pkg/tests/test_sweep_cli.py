import json

import numpy as np
import pytest

from csdr.cli import main
from csdr.config import CsdrConfig
from csdr.sweep import (
    COLUMN_GROUPS,
    SweepSpec,
    fp_spectrum,
    radius_profile,
    rows_to_csv,
    run_point,
    run_sweep,
    sweep_header,
)
from csdr.config import ConfigError


def cfg(**over) -> CsdrConfig:
    return CsdrConfig(**over)


class TestRunPoint:
    def test_default_point_fully_populated(self):
        report = run_point(cfg(d_w=6.0))
        assert report.status == "stable"
        assert report.powers is not None and report.powers.p_out > 0
        assert report.pv is not None and report.pv.p_chg > 0
        assert report.link is not None and report.link.r_b_down > 0
        assert report.losses is not None

    def test_unstable_point_short_circuits(self):
        report = run_point(cfg(d_w=11.0))
        assert report.status == "unstable"
        assert report.powers is None and report.pv is None and report.link is None
        assert report.stability.product >= 1 or report.stability.product <= 0

    def test_zero_pump_power(self):
        report = run_point(cfg(d_w=6.0, P_in=0.0))
        assert report.status == "stable"
        assert report.powers.p_out == 0.0
        assert report.pv.p_chg == 0.0
        assert report.link.r_b_down == 0.0 and report.link.r_b_up == 0.0


class TestSweepSpec:
    def test_rejects_bad_variable(self):
        with pytest.raises(ConfigError):
            SweepSpec(variables=(("bogus", 0.0, 1.0, 5),))

    def test_rejects_single_step(self):
        with pytest.raises(ConfigError):
            SweepSpec(variables=(("d_w", 0.0, 1.0, 1),))

    def test_rejects_reversed_range(self):
        with pytest.raises(ConfigError):
            SweepSpec(variables=(("d_w", 2.0, 1.0, 5),))

    def test_rejects_three_variables(self):
        with pytest.raises(ConfigError):
            SweepSpec(
                variables=(("d_w", 0, 1, 3), ("R_M2", 0, 1, 3), ("R_M3", 0, 1, 3))
            )

    def test_rejects_unknown_group(self):
        with pytest.raises(ConfigError):
            SweepSpec(variables=(("d_w", 0.5, 1.0, 3),), columns=("bogus",))

    def test_summary_column_must_be_emitted(self):
        with pytest.raises(ConfigError):
            SweepSpec(
                variables=(("d_w", 0.5, 1.0, 3),),
                columns=("stability",),
                summary_column="p_chg",
            )


class TestRunSweep:
    def test_row_count_and_order(self):
        spec = SweepSpec(variables=(("d_w", 1.0, 2.0, 5),), columns=("stability",))
        rows, summary = run_sweep(cfg(), spec)
        assert len(rows) == 5
        assert [row["d_w"] for row in rows] == [1.0, 1.25, 1.5, 1.75, 2.0]
        assert len(summary) == 1

    def test_unstable_rows_keep_stability_only(self):
        spec = SweepSpec(
            variables=(("d_w", 9.9, 10.5, 7),), columns=("stability", "powers")
        )
        rows, _ = run_sweep(cfg(), spec)
        statuses = {row["status"] for row in rows}
        assert statuses == {"stable", "unstable"}
        for row in rows:
            assert row["product"] is not None
            if row["status"] == "unstable":
                assert row["p_out"] is None

    def test_two_dim_summary_matches_bruteforce(self):
        spec = SweepSpec(
            variables=(("R_M2", 0.3, 0.9, 7), ("R_M3", 0.05, 0.3, 4)),
            columns=("powers",),
            summary_column="p_out",
        )
        rows, summary = run_sweep(cfg(d_w=1.0), spec)
        assert len(rows) == 28
        assert len(summary) == 4
        for entry in summary:
            peers = [r for r in rows if r["R_M3"] == entry["R_M3"]]
            best = max(p["p_out"] for p in peers)
            assert entry["p_out"] == best

    def test_deterministic_rerun_is_byte_identical(self):
        spec = SweepSpec(variables=(("d_w", 0.5, 6.0, 12),))
        header = sweep_header(spec)
        first_rows, _ = run_sweep(cfg(), spec)
        second_rows, _ = run_sweep(cfg(), spec)
        assert rows_to_csv(header, first_rows) == rows_to_csv(header, second_rows)


class TestProfileAndSpectrum:
    def test_profile_includes_breakpoints_and_grid(self):
        profile = radius_profile(cfg(d_w=1.0), samples=100)
        zs = [p[0] for p in profile]
        assert zs == sorted(zs)
        assert len(profile) >= 100
        assert all(w00 > 0 and w >= w00 for _, w00, w in profile)

    def test_spectrum_shape(self):
        spectrum = fp_spectrum(cfg(d_w=1.0), 0.0, 4 * np.pi, 101)
        assert len(spectrum) == 101
        assert all(0 <= t <= 1 and 0 <= r <= 1 for _, t, r in spectrum)


class TestCsvFormat:
    def test_header_and_values(self):
        spec = SweepSpec(variables=(("d_w", 1.0, 2.0, 3),), columns=("stability",))
        rows, _ = run_sweep(cfg(), spec)
        text = rows_to_csv(sweep_header(spec), rows)
        lines = text.split("\n")
        assert lines[0] == "status,d_w,g1_star,g2_star,l_star,product,stable"
        assert lines[1].startswith("stable,1,")
        assert lines[1].endswith("true")
        assert text.endswith("\n") and "\r" not in text

    def test_nine_significant_digits(self):
        from csdr.sweep import format_cell

        assert format_cell(0.123456789123) == "0.123456789"
        assert format_cell(None) == ""
        assert format_cell(True) == "true"


class TestCli:
    def test_point_csv(self, tmp_path, capsys):
        out = tmp_path / "point.csv"
        code = main(["point", "--out", str(out)])
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("status,")
        assert lines[1].startswith("stable,")

    def test_point_json(self, capsys):
        code = main(["point", "--format", "json", "--columns", "stability,powers"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload[0]["status"] == "stable"
        assert payload[0]["p_out"] > 0

    def test_sweep_writes_csv_and_summary(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        summary_out = tmp_path / "summary.csv"
        code = main(
            [
                "sweep",
                "--var", "Rp_M3=0.1:0.9:9",
                "--columns", "rates",
                "--out", str(out),
                "--summary-out", str(summary_out),
            ]
        )
        assert code == 0
        body = out.read_text(encoding="utf-8")
        assert body.count("\n") == 10  # header + 9 rows
        assert summary_out.exists()

    def test_sweep_requires_var(self, capsys):
        assert main(["sweep"]) == 2

    def test_config_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("R_M2 = 1.2\n", encoding="utf-8")
        assert main(["point", "--config", str(bad)]) == 2

    def test_unknown_column_group_exit_code(self):
        assert main(["point", "--columns", "bogus"]) == 2

    def test_malformed_var_exit_code(self):
        assert main(["sweep", "--var", "d_w=1:2"]) == 2

    def test_unstable_profile_exit_code(self, tmp_path):
        bad = tmp_path / "unstable.cfg"
        bad.write_text("d_w = 11\n", encoding="utf-8")
        assert main(["profile", "--config", str(bad)]) == 3

    def test_profile_and_spectrum_outputs(self, tmp_path):
        profile_out = tmp_path / "profile.csv"
        spectrum_out = tmp_path / "spectrum.csv"
        assert main(["profile", "--samples", "50", "--out", str(profile_out)]) == 0
        assert main(["spectrum", "--var", "phi=0:6.28:100", "--out", str(spectrum_out)]) == 0
        assert profile_out.read_text(encoding="utf-8").startswith("status,z,w00,w")
        assert spectrum_out.read_text(encoding="utf-8").startswith("status,phi,t_er,r_er")

    def test_cli_rerun_byte_identical(self, tmp_path):
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        args = ["sweep", "--var", "d_w=0.5:6:8", "--columns", "powers,charging"]
        assert main(args + ["--out", str(first)]) == 0
        assert main(args + ["--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_sweep_plot_written(self, tmp_path):
        out = tmp_path / "rates.csv"
        png = tmp_path / "rates.png"
        code = main(
            [
                "sweep",
                "--var", "Rp_M3=0.1:0.9:9",
                "--columns", "rates",
                "--out", str(out),
                "--plot", str(png),
            ]
        )
        assert code == 0
        assert png.read_bytes()[:4] == b"\x89PNG"

    def test_profile_plot_written(self, tmp_path):
        png = tmp_path / "profile.png"
        out = tmp_path / "profile.csv"
        assert main(["profile", "--samples", "64", "--out", str(out), "--plot", str(png)]) == 0
        assert png.read_bytes()[:4] == b"\x89PNG"
