"""Core data types for the downlink OFDMA scheduling simulator.

All types are immutable value objects: once constructed they can be shared
freely between concurrent workers. Matrices are dense K x N numpy arrays
(K stations, N resource units); station ids are stable indices 0..K-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

__all__ = [
    "RuPattern",
    "McsEntry",
    "SimParams",
    "StationConfig",
    "ChannelState",
    "RateMatrix",
    "ScheduleMatrix",
    "DropResult",
    "DEFAULT_MCS_TABLE",
    "SINGLE_PATTERNS",
    "MULTI_PATTERNS",
    "validate_mcs_table",
    "validate_schedule",
    "station_rate",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class RuPattern:
    """One way of splitting the channel into N equal resource units."""

    n_rus: int            # N, number of RUs in the pattern
    data_subcarriers: int  # S, data subcarriers per RU

    def __post_init__(self):
        if self.n_rus < 1:
            raise ValueError(f"n_rus must be >= 1, got {self.n_rus}")
        if self.data_subcarriers < 1:
            raise ValueError(f"data_subcarriers must be >= 1, got {self.data_subcarriers}")


@dataclass(frozen=True)
class McsEntry:
    """A modulation and coding scheme with its receiver sensitivity."""

    index: int                 # 1..L
    bits_per_symbol: int       # log2 of constellation size
    code_rate: Fraction        # dimensionless, e.g. Fraction(5, 6)
    min_rx_power_dbm: float    # sensitivity threshold (dBm)

    @property
    def spectral_efficiency(self) -> Fraction:
        """Bits per subcarrier per OFDM symbol."""
        return self.bits_per_symbol * self.code_rate


# 20 MHz channel MCS set, capped at 256-QAM 5/6 (the highest MCS available
# on 26-tone RUs; 1024-QAM is optional and needs >= 242-tone RUs).
DEFAULT_MCS_TABLE: tuple[McsEntry, ...] = (
    McsEntry(1, 1, Fraction(1, 2), -82.0),   # BPSK 1/2
    McsEntry(2, 2, Fraction(1, 2), -79.0),   # QPSK 1/2
    McsEntry(3, 2, Fraction(3, 4), -77.0),   # QPSK 3/4
    McsEntry(4, 4, Fraction(1, 2), -74.0),   # 16-QAM 1/2
    McsEntry(5, 4, Fraction(3, 4), -70.0),   # 16-QAM 3/4
    McsEntry(6, 6, Fraction(2, 3), -66.0),   # 64-QAM 2/3
    McsEntry(7, 6, Fraction(3, 4), -65.0),   # 64-QAM 3/4
    McsEntry(8, 6, Fraction(5, 6), -64.0),   # 64-QAM 5/6
    McsEntry(9, 8, Fraction(3, 4), -59.0),   # 256-QAM 3/4
    McsEntry(10, 8, Fraction(5, 6), -57.0),  # 256-QAM 5/6
)

# Patterns for a 20 MHz channel: (N RUs, S data subcarriers per RU).
SINGLE_PATTERNS: tuple[RuPattern, ...] = (RuPattern(9, 24),)
MULTI_PATTERNS: tuple[RuPattern, ...] = (RuPattern(9, 24), RuPattern(4, 48), RuPattern(2, 102))


def validate_mcs_table(table: tuple[McsEntry, ...]) -> None:
    """Check that a table is sorted with strictly increasing thresholds and rates."""
    if not table:
        raise ValueError("mcs_table must not be empty")
    for i, entry in enumerate(table):
        if entry.index != i + 1:
            raise ValueError(f"mcs_table indices must be 1..L in order, got {entry.index} at position {i}")
    for lo, hi in zip(table, table[1:]):
        if not hi.min_rx_power_dbm > lo.min_rx_power_dbm:
            raise ValueError(f"mcs_table thresholds must strictly increase (index {hi.index})")
        if not hi.spectral_efficiency > lo.spectral_efficiency:
            raise ValueError(f"mcs_table spectral efficiency must strictly increase (index {hi.index})")


@dataclass(frozen=True)
class SimParams:
    """Physical and protocol constants plus RU patterns and the RNG seed."""

    carrier_freq_ghz: float = 5.0
    d_max_m: float = 15.0          # radius of the coverage circle
    d_min_m: float = 1.0           # minimum AP-station distance
    p_total_dbm: float = 20.0      # AP power budget, shared equally by the RUs
    t_ofdm_us: float = 16.0        # OFDM symbol duration
    t_dl_ms: float = 3.2           # downlink transmission (scheduling period) duration
    patterns: tuple[RuPattern, ...] = SINGLE_PATTERNS
    mcs_table: tuple[McsEntry, ...] = DEFAULT_MCS_TABLE
    master_seed: int = 1

    def __post_init__(self):
        symbols = self.t_dl_ms * 1000.0 / self.t_ofdm_us
        if abs(symbols - round(symbols)) > 1e-9:
            raise ValueError(f"t_dl_ms/t_ofdm_us must give an integral symbol count, got {symbols}")
        if self.d_min_m < 1.0:
            raise ValueError(f"d_min_m must be >= 1, got {self.d_min_m}")
        if not self.d_min_m < self.d_max_m:
            raise ValueError(f"d_min_m must be < d_max_m, got {self.d_min_m} >= {self.d_max_m}")
        if not self.patterns:
            raise ValueError("patterns must not be empty")
        validate_mcs_table(self.mcs_table)

    @property
    def symbol_count(self) -> int:
        """OFDM symbols per scheduling period (T_DL / T_OFDM)."""
        return round(self.t_dl_ms * 1000.0 / self.t_ofdm_us)

    @property
    def p_total_mw(self) -> float:
        return 10.0 ** (self.p_total_dbm / 10.0)

    def p_ru_mw(self, pattern: RuPattern) -> float:
        """Per-RU transmit power under equal allocation (mW)."""
        return self.p_total_mw / pattern.n_rus


@dataclass(frozen=True)
class StationConfig:
    """A placed station with its throughput requirement."""

    id: int
    distance_m: float
    r_min: float          # minimum throughput requirement (bits per scheduling period)
    path_loss_db: float   # derived from distance_m, cached at placement time

    def __post_init__(self):
        if self.r_min <= 0:
            raise ValueError(f"r_min must be > 0, got {self.r_min}")


@dataclass(frozen=True)
class ChannelState:
    """Small-scale power gains for one scheduling period, one row per station."""

    gains: np.ndarray  # K x N, linear, unit mean

    def __post_init__(self):
        g = _readonly(np.asarray(self.gains, dtype=float))
        if g.ndim != 2:
            raise ValueError(f"gains must be a K x N matrix, got shape {g.shape}")
        if not np.all(np.isfinite(g)) or not np.all(g > 0):
            raise ValueError("gains must be strictly positive and finite")
        object.__setattr__(self, "gains", g)


@dataclass(frozen=True)
class RateMatrix:
    """Achievable bits per scheduling period for every (station, RU) pair.

    ``mcs_idx`` holds the selected MCS index (1..L) or 0 where the received
    power is below the lowest sensitivity; ``bits`` is 0 exactly there.
    """

    bits: np.ndarray     # K x N, bits per scheduling period
    mcs_idx: np.ndarray  # K x N, 0 = no usable MCS

    def __post_init__(self):
        bits = _readonly(np.asarray(self.bits, dtype=float))
        mcs = _readonly(np.asarray(self.mcs_idx, dtype=np.int64))
        if bits.shape != mcs.shape or bits.ndim != 2:
            raise ValueError("bits and mcs_idx must be K x N matrices of equal shape")
        if not np.array_equal(bits == 0, mcs == 0):
            raise ValueError("bits must be zero exactly where mcs_idx is 0")
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "mcs_idx", mcs)


@dataclass(frozen=True)
class ScheduleMatrix:
    """Binary station-to-RU assignment for one scheduling period."""

    assign: np.ndarray  # K x N, entries in {0, 1}

    def __post_init__(self):
        a = np.asarray(self.assign)
        if a.ndim != 2:
            raise ValueError(f"assign must be a K x N matrix, got shape {a.shape}")
        if not ((a == 0) | (a == 1)).all():
            raise ValueError("assign entries must be binary")
        object.__setattr__(self, "assign", _readonly(a.astype(np.int8)))


def validate_schedule(m: ScheduleMatrix) -> tuple[str, int] | None:
    """Check the RU-allocation constraints: each RU serves at most one station
    and each station uses at most one RU.

    Returns None when the schedule is valid, otherwise ("column", n) for the
    first RU assigned to several stations or ("row", k) for the first station
    assigned several RUs (column violations are reported first).
    """
    a = m.assign
    col_sums = a.sum(axis=0)
    bad = np.nonzero(col_sums > 1)[0]
    if bad.size:
        return ("column", int(bad[0]))
    row_sums = a.sum(axis=1)
    bad = np.nonzero(row_sums > 1)[0]
    if bad.size:
        return ("row", int(bad[0]))
    return None


def station_rate(m: ScheduleMatrix, r: RateMatrix, k: int) -> float:
    """Bits delivered to station k this period: sum_n s[k,n] * r[k,n]."""
    if m.assign.shape != r.bits.shape:
        raise ValueError(f"shape mismatch: {m.assign.shape} vs {r.bits.shape}")
    return float(m.assign[k] @ r.bits[k])


@dataclass(frozen=True)
class DropResult:
    """Per-station empirical throughput for one network realization."""

    per_station_throughput: np.ndarray  # bits per scheduling period, index = station id
    min_throughput: float               # min over stations
    final_queues: np.ndarray            # policy state at the end of the drop

    def __post_init__(self):
        tput = _readonly(np.asarray(self.per_station_throughput, dtype=float))
        if tput.ndim != 1 or tput.size == 0:
            raise ValueError("per_station_throughput must be a non-empty vector")
        if np.any(tput < 0):
            raise ValueError("throughputs must be >= 0")
        if self.min_throughput != float(tput.min()):
            raise ValueError("min_throughput must equal the vector minimum")
        object.__setattr__(self, "per_station_throughput", tput)
        object.__setattr__(self, "final_queues", _readonly(np.asarray(self.final_queues, dtype=float)))
