"""Network and fading generation plus the link-adaptation chain.

The chain for one (station, RU) pair: residential path-loss model ->
per-subcarrier received power in dBm -> highest MCS whose sensitivity is met
-> bits per scheduling period. A single MCS covers all subcarriers of a RU,
so each RU contributes S * rho_l * (T_DL / T_OFDM) bits when selected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import ChannelState, McsEntry, RateMatrix, RuPattern, SimParams, StationConfig

__all__ = [
    "NetworkRealization",
    "path_loss",
    "place_stations",
    "draw_fading",
    "received_power_dbm",
    "select_mcs",
    "bits_per_period",
    "rate_matrix",
]


@dataclass(frozen=True)
class NetworkRealization:
    """A fixed set of placed stations (one Monte-Carlo drop's geometry)."""

    stations: tuple[StationConfig, ...]

    def __post_init__(self):
        if not self.stations:
            raise ValueError("a network needs at least one station")
        for i, sta in enumerate(self.stations):
            if sta.id != i:
                raise ValueError(f"station ids must be 0..K-1 in order, got {sta.id} at {i}")
        # cached index-aligned views, used every scheduling period
        pl = np.array([s.path_loss_db for s in self.stations])
        rm = np.array([s.r_min for s in self.stations])
        pl.setflags(write=False)
        rm.setflags(write=False)
        object.__setattr__(self, "path_losses_db", pl)
        object.__setattr__(self, "r_mins", rm)

    @property
    def k_count(self) -> int:
        return len(self.stations)


def path_loss(d_m: float, fc_ghz: float) -> float:
    """Attenuation in dB for the 802.11ax residential scenario.

    40.05 + 20 log10(fc/2.4) + 20 log10(min(d, 5)) + 1{d > 5} * 35 log10(d/5)
    with fc in GHz and d in meters.
    """
    if d_m <= 0:
        raise ValueError(f"distance must be positive, got {d_m}")
    if fc_ghz <= 0:
        raise ValueError(f"carrier frequency must be positive, got {fc_ghz}")
    pl = 40.05 + 20.0 * math.log10(fc_ghz / 2.4) + 20.0 * math.log10(min(d_m, 5.0))
    if d_m > 5.0:
        pl += 35.0 * math.log10(d_m / 5.0)
    return pl


def place_stations(
    rng: np.random.Generator,
    k_count: int,
    d_min_m: float,
    d_max_m: float,
    r_min: float,
    fc_ghz: float = 5.0,
) -> NetworkRealization:
    """Drop stations uniformly over the annulus area between d_min and d_max.

    Area uniformity means the radial density is proportional to d, i.e. d^2
    is uniform on [d_min^2, d_max^2].
    """
    if k_count < 1:
        raise ValueError(f"k_count must be >= 1, got {k_count}")
    d = np.sqrt(rng.uniform(d_min_m**2, d_max_m**2, size=k_count))
    stations = tuple(
        StationConfig(id=k, distance_m=float(d[k]), r_min=r_min, path_loss_db=path_loss(float(d[k]), fc_ghz))
        for k in range(k_count)
    )
    return NetworkRealization(stations)


def draw_fading(rng: np.random.Generator, k_count: int, n_rus: int) -> ChannelState:
    """Unit-mean exponential power gains, i.i.d. across stations and RUs.

    These are the squared magnitudes of unit-variance Rayleigh amplitudes;
    block fading makes them independent across scheduling periods as well.
    """
    if k_count < 1 or n_rus < 1:
        raise ValueError("k_count and n_rus must be >= 1")
    return ChannelState(rng.standard_exponential((k_count, n_rus)))


def received_power_dbm(p_ru_mw: float, s: int, pl_db: float, g: float) -> float:
    """Per-subcarrier received power: 10 log10(p_ru/S) - PL + 10 log10(g) (dBm)."""
    if p_ru_mw <= 0 or s <= 0:
        raise ValueError("per-RU power and subcarrier count must be positive")
    if g < 0:
        raise ValueError(f"channel gain must be >= 0, got {g}")
    if g == 0:
        return -math.inf
    return 10.0 * math.log10(p_ru_mw / s) - pl_db + 10.0 * math.log10(g)


def select_mcs(rx_dbm: float, table: tuple[McsEntry, ...]) -> int | None:
    """Highest MCS index whose sensitivity is met, or None below the table."""
    if not table:
        raise ValueError("mcs table must not be empty")
    chosen = None
    for entry in table:
        if rx_dbm >= entry.min_rx_power_dbm:
            chosen = entry.index
        else:
            break
    return chosen


def bits_per_period(s: int, mcs: McsEntry, symbol_count: int) -> int:
    """Bits per scheduling period on one RU: S * rho_l * symbol count.

    Exact integer arithmetic (code rates are Fractions), so e.g. 256-QAM 5/6
    on 24 subcarriers over 200 symbols gives exactly 32000 bits.
    """
    value = s * mcs.spectral_efficiency * symbol_count
    if value.denominator != 1:
        # Non-integral bit counts cannot occur with the standard table; keep
        # the exact rational value rounded down if a caller feeds a toy one.
        return int(value)
    return value.numerator


# keyed by object identity: hashing Fractions every period would dominate
_MCS_LOOKUP_CACHE: dict = {}


def _mcs_lookup(mcs_table: tuple[McsEntry, ...], s: int, symbol_count: int) -> tuple[np.ndarray, np.ndarray]:
    """Sensitivity thresholds and the rate of each MCS index (0 = no MCS)."""
    key = (id(mcs_table), s, symbol_count)
    hit = _MCS_LOOKUP_CACHE.get(key)
    if hit is not None and hit[0] is mcs_table:
        return hit[1], hit[2]
    thresholds = np.array([e.min_rx_power_dbm for e in mcs_table])
    rates = np.zeros(len(mcs_table) + 1)
    for entry in mcs_table:
        rates[entry.index] = bits_per_period(s, entry, symbol_count)
    thresholds.setflags(write=False)
    rates.setflags(write=False)
    _MCS_LOOKUP_CACHE[key] = (mcs_table, thresholds, rates)
    return thresholds, rates


def rate_matrix(
    params: SimParams,
    net: NetworkRealization,
    ch: ChannelState,
    pat: RuPattern,
) -> RateMatrix:
    """Achievable bits per period for every (station, RU) pair of one pattern."""
    g = ch.gains
    if g.shape != (net.k_count, pat.n_rus):
        raise ValueError(f"channel shape {g.shape} does not match (K={net.k_count}, N={pat.n_rus})")
    base = 10.0 * math.log10(params.p_ru_mw(pat) / pat.data_subcarriers)
    rx = base - net.path_losses_db[:, None] + 10.0 * np.log10(g)
    thresholds, rates = _mcs_lookup(params.mcs_table, pat.data_subcarriers, params.symbol_count)
    # index into (0=no MCS, 1..L); side="right" keeps exact-threshold hits in.
    mcs_idx = np.searchsorted(thresholds, rx, side="right")
    return RateMatrix(bits=rates[mcs_idx], mcs_idx=mcs_idx)
