"""Monte-Carlo campaign engine.

A campaign runs M independent network realizations ("drops"). Each drop
fixes station positions (hence path losses) and runs T scheduling periods in
which only the fast fading changes; policy state persists across the periods
of a drop and resets between drops. RNG substreams are derived from the
master seed per (drop, purpose), so results are bit-reproducible regardless
of execution order or worker count.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .channel import draw_fading, place_stations
from .domain import DropResult, SimParams, validate_schedule
from .policies import decide, make_policy

__all__ = [
    "CampaignConfig",
    "CampaignResult",
    "SweepPoint",
    "run_drop",
    "run_campaign",
    "scaling_sweep",
    "empirical_cdf",
    "fraction_below",
]

_PLACEMENT_STREAM = 0
_FADING_STREAM = 1

POLICIES = ("wmm", "pf", "esrm")
PATTERN_MODES = ("single", "multi")


@dataclass(frozen=True)
class CampaignConfig:
    """Everything needed to reproduce one campaign."""

    params: SimParams
    policy: str = "wmm"
    pattern_mode: str = "single"
    k_count: int = 12
    periods: int = 1000        # fading realizations per drop (T)
    num_networks: int = 100    # network realizations (M)
    r_min: float = 20000.0     # bits per scheduling period, same for every station
    v: float = 900.0           # WMM control parameter
    v_esr: float = 10.0        # ESRM control parameter
    beta: float = 0.01         # PF smoothing factor
    pf_floor: float = 1.0      # PF moving-average floor (bits/period)
    gamma_norm: str = "rmax"   # WMM auxiliary scaling, see policies.GAMMA_NORMS
    workers: int = 1
    validate_schedules: bool = False  # debug: re-check constraints every period

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ValueError(f"policy must be one of {POLICIES}, got {self.policy!r}")
        if self.pattern_mode not in PATTERN_MODES:
            raise ValueError(f"pattern_mode must be one of {PATTERN_MODES}, got {self.pattern_mode!r}")
        for name in ("k_count", "periods", "num_networks", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.r_min <= 0:
            raise ValueError(f"r_min must be > 0, got {self.r_min}")


@dataclass(frozen=True)
class CampaignResult:
    """Drop results in network-id order plus per-drop timing."""

    drops: tuple[DropResult, ...]
    config: CampaignConfig
    drop_seconds: tuple[float, ...]

    @property
    def min_throughputs(self) -> np.ndarray:
        """Per-drop minimum station throughput (bits/period)."""
        return np.array([d.min_throughput for d in self.drops])


@dataclass(frozen=True)
class SweepPoint:
    k_count: int
    mean_min_throughput: float
    result: CampaignResult


def _substream(seed: int, network_id: int, purpose: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(network_id, purpose)))


def run_drop(config: CampaignConfig, network_id: int) -> DropResult:
    """Simulate one network realization for T scheduling periods."""
    params = config.params
    place_rng = _substream(params.master_seed, network_id, _PLACEMENT_STREAM)
    fading_rng = _substream(params.master_seed, network_id, _FADING_STREAM)
    net = place_stations(
        place_rng, config.k_count, params.d_min_m, params.d_max_m, config.r_min, params.carrier_freq_ghz
    )
    policy = make_policy(
        config.policy,
        config.k_count,
        params,
        v=config.v,
        v_esr=config.v_esr,
        beta=config.beta,
        pf_floor=config.pf_floor,
        gamma_norm=config.gamma_norm,
    )
    r_min = net.r_mins
    acc = np.zeros(config.k_count)
    for _ in range(config.periods):
        channels = [draw_fading(fading_rng, config.k_count, pat.n_rus) for pat in params.patterns]
        _, schedule, realized = decide(policy, params, net, channels)
        if config.validate_schedules:
            violation = validate_schedule(schedule)
            if violation is not None:
                raise RuntimeError(f"policy {config.policy} emitted an invalid schedule: {violation}")
        acc += realized
        policy.update(realized, r_min)
    throughput = acc / config.periods
    return DropResult(
        per_station_throughput=throughput,
        min_throughput=float(throughput.min()),
        final_queues=policy.queues.copy(),
    )


def _timed_drop(config: CampaignConfig, network_id: int) -> tuple[int, DropResult, float]:
    start = time.perf_counter()
    drop = run_drop(config, network_id)
    return network_id, drop, time.perf_counter() - start


def run_campaign(config: CampaignConfig) -> CampaignResult:
    """Run all M drops; results come back ordered by network id."""
    ids = range(config.num_networks)
    if config.workers <= 1:
        rows = [_timed_drop(config, i) for i in ids]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_timed_drop, [config] * config.num_networks, ids))
    rows.sort(key=lambda row: row[0])
    return CampaignResult(
        drops=tuple(row[1] for row in rows),
        config=config,
        drop_seconds=tuple(row[2] for row in rows),
    )


def scaling_sweep(config: CampaignConfig, k_values) -> list[SweepPoint]:
    """Average minimum throughput as the station count grows."""
    if not k_values:
        raise ValueError("k_values must not be empty")
    points = []
    for k in k_values:
        result = run_campaign(replace(config, k_count=int(k)))
        points.append(SweepPoint(int(k), float(result.min_throughputs.mean()), result))
    return points


def empirical_cdf(values) -> list[tuple[float, float]]:
    """Step-function CDF points (x_(i), i/M) with duplicate x merged."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("values must not be empty")
    xs = np.sort(values)
    m = xs.size
    points = []
    for i, x in enumerate(xs):
        f = (i + 1) / m
        if points and points[-1][0] == x:
            points[-1] = (float(x), f)
        else:
            points.append((float(x), f))
    return points


def fraction_below(values, threshold: float) -> float:
    """Fraction of values strictly below the threshold."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("values must not be empty")
    return float(np.mean(values < threshold))
