"""Command-line entry point, configuration loading, and result persistence.

Configuration is a flat ``key = value`` text file mirroring the campaign
fields (see DEFAULTS for the full key set); command-line flags override the
file, the file overrides the built-in defaults. Outputs are plain CSV/JSON
files whose numeric content is byte-identical across re-runs with the same
seed, regardless of worker count.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .domain import MULTI_PATTERNS, SINGLE_PATTERNS, SimParams
from .policies import GAMMA_NORMS
from .sim import (
    PATTERN_MODES,
    POLICIES,
    CampaignConfig,
    CampaignResult,
    empirical_cdf,
    fraction_below,
    run_campaign,
)

__all__ = ["ConfigError", "OutputBundle", "parse_config", "write_results", "main"]


class ConfigError(ValueError):
    """Bad configuration value; the message names the offending field."""


DEFAULTS: dict = {
    "policy": "wmm",
    "pattern_mode": "single",
    "stations": (12,),
    "r_min": 20000.0,        # bits per scheduling period
    "periods": 1000,         # fading realizations per drop
    "networks": 100,         # network realizations
    "seed": 1,
    "v": 900.0,
    "v_esr": 10.0,
    "beta": 0.01,
    "pf_floor": 1.0,
    "gamma_norm": "rmax",
    "workers": 1,
    "validate_schedules": False,
    "carrier_freq_ghz": 5.0,
    "d_max_m": 15.0,
    "d_min_m": 1.0,
    "p_total_dbm": 20.0,
    "t_ofdm_us": 16.0,
    "t_dl_ms": 3.2,
}

_INT_KEYS = ("periods", "networks", "seed", "workers")
_FLOAT_KEYS = ("r_min", "v", "v_esr", "beta", "pf_floor", "carrier_freq_ghz",
               "d_max_m", "d_min_m", "p_total_dbm", "t_ofdm_us", "t_dl_ms")
_POSITIVE_KEYS = ("r_min", "periods", "networks", "v", "v_esr", "beta", "pf_floor",
                  "workers", "carrier_freq_ghz", "d_max_m", "d_min_m", "p_total_dbm",
                  "t_ofdm_us", "t_dl_ms")


def _parse_value(key: str, raw):
    """Coerce a raw string (from file or flag) to the field's type."""
    if isinstance(raw, str):
        raw = raw.strip()
    try:
        if key == "stations":
            if isinstance(raw, (list, tuple)):
                return tuple(int(x) for x in raw)
            return tuple(int(x) for x in str(raw).split(","))
        if key in _INT_KEYS:
            return int(str(raw))
        if key in _FLOAT_KEYS:
            return float(str(raw))
        if key == "validate_schedules":
            if isinstance(raw, bool):
                return raw
            if str(raw).lower() in ("true", "1", "yes"):
                return True
            if str(raw).lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse value {raw!r}") from exc
    return raw


def _read_config_file(path: Path) -> dict:
    values = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in DEFAULTS:
            raise ConfigError(f"{path}:{lineno}: unknown field {key!r}")
        values[key] = _parse_value(key, raw)
    return values


def parse_config(path: str | Path | None, overrides: dict | None = None) -> tuple[CampaignConfig, tuple[int, ...]]:
    """Merge defaults, an optional config file, and flag overrides.

    Returns the campaign configuration (using the first station count) plus
    the full tuple of station counts; more than one count means a scaling
    sweep.
    """
    values = dict(DEFAULTS)
    if path is not None:
        file_path = Path(path)
        if not file_path.exists():
            raise ConfigError(f"config: file not found: {file_path}")
        values.update(_read_config_file(file_path))
    for key, raw in (overrides or {}).items():
        if raw is None:
            continue
        if key not in DEFAULTS:
            raise ConfigError(f"unknown field {key!r}")
        values[key] = _parse_value(key, raw)

    if values["policy"] not in POLICIES:
        raise ConfigError(f"policy: must be one of {POLICIES}, got {values['policy']!r}")
    if values["pattern_mode"] not in PATTERN_MODES:
        raise ConfigError(f"pattern_mode: must be one of {PATTERN_MODES}, got {values['pattern_mode']!r}")
    if values["gamma_norm"] not in GAMMA_NORMS:
        raise ConfigError(f"gamma_norm: must be one of {GAMMA_NORMS}, got {values['gamma_norm']!r}")
    for key in _POSITIVE_KEYS:
        if values[key] <= 0:
            raise ConfigError(f"{key}: must be positive, got {values[key]}")
    if values["seed"] < 0:
        raise ConfigError(f"seed: must be >= 0, got {values['seed']}")
    stations = values["stations"]
    if not stations or any(k < 1 for k in stations):
        raise ConfigError(f"stations: counts must be >= 1, got {stations}")

    params = SimParams(
        carrier_freq_ghz=values["carrier_freq_ghz"],
        d_max_m=values["d_max_m"],
        d_min_m=values["d_min_m"],
        p_total_dbm=values["p_total_dbm"],
        t_ofdm_us=values["t_ofdm_us"],
        t_dl_ms=values["t_dl_ms"],
        patterns=SINGLE_PATTERNS if values["pattern_mode"] == "single" else MULTI_PATTERNS,
        master_seed=values["seed"],
    )
    try:
        config = CampaignConfig(
            params=params,
            policy=values["policy"],
            pattern_mode=values["pattern_mode"],
            k_count=stations[0],
            periods=values["periods"],
            num_networks=values["networks"],
            r_min=values["r_min"],
            v=values["v"],
            v_esr=values["v_esr"],
            beta=values["beta"],
            pf_floor=values["pf_floor"],
            gamma_norm=values["gamma_norm"],
            workers=values["workers"],
            validate_schedules=values["validate_schedules"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return config, stations


@dataclass(frozen=True)
class OutputBundle:
    drops_csv: Path
    summary_json: Path
    cdf_csv: Path


def _config_echo(config: CampaignConfig) -> dict:
    echo = dataclasses.asdict(config)
    params = echo.pop("params")
    params["patterns"] = [[p["n_rus"], p["data_subcarriers"]] for p in params["patterns"]]
    params["mcs_table"] = [
        {
            "index": e["index"],
            "bits_per_symbol": e["bits_per_symbol"],
            "code_rate": str(e["code_rate"]),
            "min_rx_power_dbm": e["min_rx_power_dbm"],
        }
        for e in params["mcs_table"]
    ]
    echo["params"] = params
    return echo


def write_results(result: CampaignResult, out_dir: str | Path) -> OutputBundle:
    """Persist a campaign: per-station drops.csv, summary.json, cdf.csv."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        bundle = OutputBundle(out / "drops.csv", out / "summary.json", out / "cdf.csv")

        lines = ["network_id,station_id,throughput_bits_per_period"]
        for network_id, drop in enumerate(result.drops):
            for station_id, tput in enumerate(drop.per_station_throughput):
                lines.append(f"{network_id},{station_id},{float(tput)!r}")
        bundle.drops_csv.write_text("\n".join(lines) + "\n")

        mins = result.min_throughputs
        summary = {
            "unit": "bits_per_period",
            "config": _config_echo(result.config),
            "min_throughputs": [float(x) for x in mins],
            "mean_min_throughput": float(mins.mean()),
            "median_min_throughput": float(np.median(mins)),
            "fraction_below_r_min": fraction_below(mins, result.config.r_min),
        }
        bundle.summary_json.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")

        lines = ["x_bits_per_period,cdf"]
        for x, f in empirical_cdf(mins):
            lines.append(f"{x!r},{f!r}")
        bundle.cdf_csv.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write results under {out}: {exc}") from exc
    return bundle


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ofdma-sched",
        description="Monte-Carlo simulator for throughput-constrained downlink OFDMA scheduling",
    )
    parser.add_argument("--config", help="flat key=value configuration file")
    parser.add_argument("--policy", choices=POLICIES, help="scheduling policy")
    parser.add_argument("--pattern-mode", choices=PATTERN_MODES, dest="pattern_mode", help="RU pattern set")
    parser.add_argument("--stations", type=int, action="append",
                        help="station count; repeat for a scaling sweep")
    parser.add_argument("--rmin", type=float, dest="r_min", help="per-station requirement (bits/period)")
    parser.add_argument("--periods", type=int, help="fading realizations per drop (T)")
    parser.add_argument("--networks", type=int, help="network realizations (M)")
    parser.add_argument("--seed", type=int, help="master RNG seed")
    parser.add_argument("--v", type=float, help="WMM control parameter")
    parser.add_argument("--v-esr", type=float, dest="v_esr", help="ESRM control parameter")
    parser.add_argument("--beta", type=float, help="PF smoothing factor")
    parser.add_argument("--workers", type=int, help="parallel drop workers")
    parser.add_argument("--out", default="results", help="output directory")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = {
        key: getattr(args, key)
        for key in ("policy", "pattern_mode", "stations", "r_min", "periods",
                    "networks", "seed", "v", "v_esr", "beta", "workers")
    }
    try:
        config, k_values = parse_config(args.config, overrides)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    try:
        out = Path(args.out)
        if len(k_values) == 1:
            result = run_campaign(config)
            write_results(result, out)
            _report(result, out)
        else:
            sweep_lines = ["k_count,mean_min_throughput_bits_per_period"]
            for k in k_values:
                result = run_campaign(dataclasses.replace(config, k_count=k))
                write_results(result, out / f"k{k:02d}")
                _report(result, out / f"k{k:02d}")
                sweep_lines.append(f"{k},{float(result.min_throughputs.mean())!r}")
            out.mkdir(parents=True, exist_ok=True)
            (out / "sweep.csv").write_text("\n".join(sweep_lines) + "\n")
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    return 0


def _report(result: CampaignResult, out: Path) -> None:
    mins = result.min_throughputs
    cfg = result.config
    print(
        f"{cfg.policy}/{cfg.pattern_mode} K={cfg.k_count} M={cfg.num_networks} T={cfg.periods}: "
        f"median min throughput {float(np.median(mins)):.1f} bits/period, "
        f"fraction below r_min {fraction_below(mins, cfg.r_min):.2f} -> {out}"
    )
