import io
import json

import numpy as np
import pytest

from hetcoord import (ConfigError, CurveRow, CurveTable, EmitError,
                      NetworkConfig, emit_results, load_config,
                      parse_results_csv)
from hetcoord.cli import main as cli_main


def sample_table(n=3):
    rows = [
        CurveRow(scenario="rate_vs_snr", strategy="full", x_name="snr_db",
                 x_value=float(5 * i), metric="rate_per_cell_macro",
                 value=1.0 / (i + 3), stderr=0.01 * (i + 1), trials=100, seed=7)
        for i in range(n)
    ]
    return CurveTable(rows=rows)


class TestLoadConfig:
    def test_empty_document_gives_defaults(self):
        cfg = load_config("")
        assert (cfg.macro_antennas, cfg.micro_antennas) == (4, 2)
        assert (cfg.macro_erp_dbm, cfg.micro_erp_dbm) == (46.0, 30.0)
        assert (cfg.macro_users, cfg.micro_users) == (6, 4)
        assert (cfg.macro_radius_m, cfg.micro_radius_m) == (1000.0, 70.0)
        assert (cfg.pathloss_exp_uma, cfg.pathloss_exp_umi) == (4.0, 3.5)
        assert cfg.shadow_sigma_db == 8.0

    def test_rho_out_of_range(self):
        with pytest.raises(ConfigError) as err:
            load_config("rho: 1.5")
        assert err.value.key == "rho"
        assert "[0, 1]" in str(err.value)

    def test_single_override(self):
        cfg = load_config("micro_radius_m: 100")
        assert cfg.micro_radius_m == 100.0
        assert cfg.macro_radius_m == 1000.0

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError) as err:
            load_config("macro_radisu_m: 5")
        assert err.value.key == "macro_radisu_m"

    def test_file_path_source(self, tmp_path):
        path = tmp_path / "net.yaml"
        path.write_text("trials: 55\nbase_seed: 3\n")
        cfg = load_config(str(path))
        assert cfg.trials == 55 and cfg.base_seed == 3

    def test_defaults_are_valid(self):
        NetworkConfig().validate()


class TestEmitResults:
    def test_single_row_csv(self):
        buf = io.StringIO()
        emit_results(sample_table(1), "csv", buf)
        lines = buf.getvalue().splitlines()
        assert len(lines) == 2
        assert lines[0] == "scenario,strategy,x_name,x_value,metric,value,stderr,trials,seed"

    def test_byte_identical_emission(self, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_results(sample_table(), "csv", str(p1))
        emit_results(sample_table(), "csv", str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_round_trip_exact(self):
        table = sample_table(5)
        # adversarial float: 17 significant digits must round-trip it
        table.rows.append(CurveRow("rate_vs_snr", "full", "snr_db", 0.1,
                                   "mean_sinr", 1 / 3, np.nextafter(0.2, 1), 10, 1))
        buf = io.StringIO()
        emit_results(table, "csv", buf)
        back = parse_results_csv(buf.getvalue())
        assert back.rows == table.rows

    def test_json_records(self):
        buf = io.StringIO()
        emit_results(sample_table(2), "json", buf)
        records = json.loads(buf.getvalue())
        assert isinstance(records, list) and len(records) == 2
        assert records[0]["metric"] == "rate_per_cell_macro"
        assert records[0]["value"] == sample_table(2).rows[0].value

    def test_empty_table_rejected(self):
        with pytest.raises(EmitError):
            emit_results(CurveTable(rows=[]), "csv", io.StringIO())

    def test_missing_directory(self):
        with pytest.raises(EmitError):
            emit_results(sample_table(), "csv", "/nonexistent-dir-xyz/out.csv")


class TestCli:
    def run_cli(self, *args):
        return cli_main(list(args))

    def test_happy_path(self, tmp_path, capsys):
        out = tmp_path / "curves.csv"
        code = self.run_cli("--scenario", "rate_vs_snr", "--strategy", "no_coord",
                            "--snr", "10", "--trials", "4", "--out", str(out))
        assert code == 0
        table = parse_results_csv(str(out))
        assert table.get(strategy="no_coord", metric="rate_per_cell_macro")

    def test_stdout_default(self, capsys):
        code = self.run_cli("--scenario", "rate_vs_snr", "--strategy", "no_coord",
                            "--snr", "10", "--trials", "2")
        assert code == 0
        assert capsys.readouterr().out.startswith("scenario,strategy,")

    def test_config_error_exit_code(self, capsys):
        code = self.run_cli("--rho", "1.5", "--trials", "2")
        assert code == 2

    def test_placement_error_exit_code(self, tmp_path, capsys):
        # 40 microcells cannot fit with 140 m spacing in edge mode
        cfg = tmp_path / "bad.yaml"
        cfg.write_text("microcell_placement: edge_annulus\nplacement_attempts: 50\n")
        code = self.run_cli("--config", str(cfg), "--scenario", "sinr_vs_density",
                            "--strategy", "no_coord", "--snr", "10",
                            "--microcells", "40", "--trials", "1")
        assert code == 3

    def test_emit_error_exit_code(self, capsys):
        code = self.run_cli("--scenario", "rate_vs_snr", "--strategy", "no_coord",
                            "--snr", "10", "--trials", "2",
                            "--out", "/nonexistent-dir-xyz/out.csv")
        assert code == 4

    def test_grid_parsing(self, capsys):
        code = self.run_cli("--scenario", "rate_vs_snr", "--strategy", "no_coord",
                            "--snr", "0:10:5", "--trials", "2")
        assert code == 0
        out = capsys.readouterr().out
        for x in ("0,", "5,", "10,"):
            assert f"snr_db,{x}" in out

    def test_flags_override_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "net.yaml"
        cfg.write_text("trials: 999999\nscenario: sinr_vs_density\n")
        out = tmp_path / "o.csv"
        code = self.run_cli("--config", str(cfg), "--scenario", "rate_vs_snr",
                            "--strategy", "no_coord", "--snr", "10",
                            "--trials", "3", "--out", str(out))
        assert code == 0
        table = parse_results_csv(str(out))
        assert table.rows[0].trials == 3
