import json

import numpy as np
import pytest

from ofdma_sched import MULTI_PATTERNS, SINGLE_PATTERNS, run_campaign
from ofdma_sched.cli import ConfigError, main, parse_config, write_results
from ofdma_sched.sim import fraction_below


class TestParseConfig:
    def test_defaults(self):
        config, k_values = parse_config(None, {})
        assert config.policy == "wmm"
        assert config.pattern_mode == "single"
        assert k_values == (12,)
        assert config.k_count == 12
        assert config.r_min == 20000.0
        assert config.periods == 1000
        assert config.num_networks == 100
        assert config.v == 900.0
        assert config.v_esr == 10.0
        assert config.beta == 0.01
        p = config.params
        assert (p.carrier_freq_ghz, p.d_max_m, p.d_min_m) == (5.0, 15.0, 1.0)
        assert (p.p_total_dbm, p.t_ofdm_us, p.t_dl_ms) == (20.0, 16.0, 3.2)
        assert p.patterns == SINGLE_PATTERNS

    def test_multi_mode_selects_three_patterns(self):
        config, _ = parse_config(None, {"pattern_mode": "multi"})
        assert config.params.patterns == MULTI_PATTERNS

    def test_file_overrides_defaults(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("stations = 6\npolicy = esrm\nr_min = 1000\n# comment\n\nperiods = 7\n")
        config, k_values = parse_config(cfg, {})
        assert (config.policy, config.k_count, config.r_min, config.periods) == ("esrm", 6, 1000.0, 7)
        assert k_values == (6,)

    def test_flags_override_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("stations = 12\n")
        config, k_values = parse_config(cfg, {"stations": [20]})
        assert config.k_count == 20
        assert k_values == (20,)

    def test_station_list_for_sweeps(self):
        _, k_values = parse_config(None, {"stations": "4,8,12"})
        assert k_values == (4, 8, 12)

    def test_unknown_policy_names_the_field(self):
        with pytest.raises(ConfigError, match="policy"):
            parse_config(None, {"policy": "bogus"})

    def test_nonpositive_numeric_names_the_field(self):
        with pytest.raises(ConfigError, match="periods"):
            parse_config(None, {"periods": 0})
        with pytest.raises(ConfigError, match="r_min"):
            parse_config(None, {"r_min": -1.0})

    def test_malformed_file_points_at_the_line(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("stations 12\n")
        with pytest.raises(ConfigError, match="run.cfg:1"):
            parse_config(cfg, {})

    def test_unknown_key_is_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("stattions = 12\n")
        with pytest.raises(ConfigError, match="stattions"):
            parse_config(cfg, {})

    def test_missing_file_is_an_error(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            parse_config(tmp_path / "nope.cfg", {})


def _tiny_result():
    config, _ = parse_config(None, {"stations": [2], "periods": 5, "networks": 3, "r_min": 100.0})
    return run_campaign(config)


class TestWriteResults:
    def test_drops_csv_row_count(self, tmp_path):
        config, _ = parse_config(None, {"stations": [1], "periods": 2, "networks": 1})
        bundle = write_results(run_campaign(config), tmp_path)
        rows = bundle.drops_csv.read_text().strip().splitlines()
        assert rows[0] == "network_id,station_id,throughput_bits_per_period"
        assert len(rows) == 2  # header + one station of one drop

    def test_cdf_ends_at_one(self, tmp_path):
        bundle = write_results(_tiny_result(), tmp_path)
        rows = bundle.cdf_csv.read_text().strip().splitlines()
        assert rows[0] == "x_bits_per_period,cdf"
        assert rows[-1].endswith(",1.0")

    def test_summary_consistent_with_drops_csv(self, tmp_path):
        result = _tiny_result()
        bundle = write_results(result, tmp_path)
        summary = json.loads(bundle.summary_json.read_text())

        per_drop: dict[int, list[float]] = {}
        for line in bundle.drops_csv.read_text().strip().splitlines()[1:]:
            network_id, _, tput = line.split(",")
            per_drop.setdefault(int(network_id), []).append(float(tput))
        mins = np.array([min(v) for _, v in sorted(per_drop.items())])

        assert summary["min_throughputs"] == pytest.approx(mins.tolist(), abs=0)
        assert summary["mean_min_throughput"] == float(mins.mean())
        assert summary["median_min_throughput"] == float(np.median(mins))
        assert summary["fraction_below_r_min"] == fraction_below(mins, result.config.r_min)
        assert summary["config"]["r_min"] == 100.0

    def test_rerun_is_byte_identical(self, tmp_path):
        a = write_results(_tiny_result(), tmp_path / "a")
        b = write_results(_tiny_result(), tmp_path / "b")
        assert a.drops_csv.read_bytes() == b.drops_csv.read_bytes()
        assert a.summary_json.read_bytes() == b.summary_json.read_bytes()
        assert a.cdf_csv.read_bytes() == b.cdf_csv.read_bytes()


class TestMain:
    def test_end_to_end_files(self, tmp_path):
        out = tmp_path / "out"
        rc = main([
            "--policy", "pf", "--stations", "2", "--periods", "5", "--networks", "2",
            "--rmin", "100", "--out", str(out),
        ])
        assert rc == 0
        assert (out / "drops.csv").exists()
        assert (out / "summary.json").exists()
        assert (out / "cdf.csv").exists()

    def test_sweep_layout(self, tmp_path):
        out = tmp_path / "sweep"
        rc = main([
            "--policy", "pf", "--stations", "2", "--stations", "3", "--periods", "4",
            "--networks", "2", "--rmin", "100", "--out", str(out),
        ])
        assert rc == 0
        assert (out / "k02" / "summary.json").exists()
        assert (out / "k03" / "summary.json").exists()
        sweep = (out / "sweep.csv").read_text().strip().splitlines()
        assert sweep[0] == "k_count,mean_min_throughput_bits_per_period"
        assert len(sweep) == 3
        # sweep means equal the per-K summaries
        for line in sweep[1:]:
            k, mean = line.split(",")
            summary = json.loads((out / f"k{int(k):02d}" / "summary.json").read_text())
            assert float(mean) == summary["mean_min_throughput"]

    def test_config_error_exit_code(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("policy = bogus\n")
        rc = main(["--config", str(cfg), "--out", str(tmp_path / "out")])
        assert rc == 2
        assert "policy" in capsys.readouterr().err

    def test_bad_flag_value_exits_nonzero(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--policy", "bogus"])
        assert exc.value.code != 0
        assert "--policy" in capsys.readouterr().err

    def test_io_error_exit_code(self, tmp_path, capsys):
        blocker = tmp_path / "not_a_dir"
        blocker.write_text("")
        rc = main([
            "--policy", "pf", "--stations", "1", "--periods", "2", "--networks", "1",
            "--out", str(blocker),
        ])
        assert rc == 1
        assert "not_a_dir" in capsys.readouterr().err
