"""Per-period scheduling controllers.

Three policies share a decide/update contract:

* ``wmm``  -- weighted max-min fairness via drift-plus-penalty. Virtual
  queues Q_k track how far each station's throughput-to-requirement ratio
  lags the auxiliary targets; the per-period schedule maximizes
  sum_k Q_k * r_k / r_min_k.
* ``pf``   -- proportional fairness: weight each rate by the inverse of an
  exponential moving average of the station's throughput.
* ``esrm`` -- ergodic sum-rate maximization under minimum-throughput
  constraints, with deficit queues Z_k and control parameter V_ESR.

``decide`` also handles RU-pattern selection: with several configured
patterns the assignment problem is solved per pattern with the policy's own
weights and the pattern with the largest objective wins (ties go to the
lowest pattern index).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .assignment import assignment_value, max_weight_assignment
from .channel import NetworkRealization, bits_per_period, rate_matrix
from .domain import ChannelState, RateMatrix, RuPattern, ScheduleMatrix, SimParams

__all__ = [
    "WmmState",
    "PfState",
    "EsrmState",
    "wmm_aux_step",
    "wmm_weights",
    "wmm_queue_update",
    "pf_weights",
    "pf_update",
    "esrm_weights",
    "esrm_queue_update",
    "WmmPolicy",
    "PfPolicy",
    "EsrmPolicy",
    "make_policy",
    "decide",
    "rate_options",
    "max_per_ru_rate",
]

# How the rate-unit auxiliary targets are scaled before entering the queue
# recursion (see WmmState.gamma_norm):
#   "rmax" -- divide by R_max: arrivals are 0 or 1 regardless of r_min, so
#             queues stay pinned near zero whenever the requirement is easy.
#   "rmin" -- divide by the station's r_min, mirroring the service term.
GAMMA_NORMS = ("rmax", "rmin")


def rate_options(params: SimParams) -> tuple[int, ...]:
    """All achievable per-RU rates (bits/period) over the configured patterns."""
    opts = {
        bits_per_period(pat.data_subcarriers, entry, params.symbol_count)
        for pat in params.patterns
        for entry in params.mcs_table
    }
    return tuple(sorted(opts))


def max_per_ru_rate(params: SimParams) -> float:
    """R_max: the largest single-RU rate over all patterns and MCSs."""
    return float(rate_options(params)[-1])


@dataclass(frozen=True)
class WmmState:
    """Controller state of the weighted max-min scheduler."""

    q: np.ndarray                     # virtual queues, one per station, always >= 0
    v: float                          # drift-plus-penalty control parameter
    r_max: float                      # max per-RU rate (bits/period)
    gamma_options: tuple[int, ...]    # achievable per-RU rates (bits/period)
    gamma_norm: str = "rmax"

    def __post_init__(self):
        if self.v <= 0:
            raise ValueError(f"v must be > 0, got {self.v}")
        if self.gamma_norm not in GAMMA_NORMS:
            raise ValueError(f"gamma_norm must be one of {GAMMA_NORMS}, got {self.gamma_norm!r}")
        q = np.asarray(self.q, dtype=float)
        if np.any(q < 0):
            raise ValueError("queues must be >= 0")
        object.__setattr__(self, "q", q)


@dataclass(frozen=True)
class PfState:
    """Exponential moving averages driving the proportional-fair weights."""

    ema: np.ndarray          # per-station throughput average (bits/period), > 0
    beta: float              # smoothing factor in (0, 1]
    epsilon_init: float = 1.0  # floor keeping 1/ema finite

    def __post_init__(self):
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must be in (0, 1], got {self.beta}")
        if self.epsilon_init <= 0:
            raise ValueError(f"epsilon_init must be > 0, got {self.epsilon_init}")
        ema = np.asarray(self.ema, dtype=float)
        if np.any(ema <= 0):
            raise ValueError("ema entries must be > 0")
        object.__setattr__(self, "ema", ema)


@dataclass(frozen=True)
class EsrmState:
    """Deficit queues of the constrained sum-rate scheduler."""

    z: np.ndarray   # bits/period units, always >= 0
    v_esr: float

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        if np.any(z < 0):
            raise ValueError("queues must be >= 0")
        object.__setattr__(self, "z", z)


def wmm_aux_step(state: WmmState) -> np.ndarray:
    """Optimal auxiliary targets in rate units: all R_max if V > sum(Q), else all 0.

    The auxiliary subproblem maximizes V * min_k(gamma_k) - sum_k Q_k gamma_k
    over the box [0, R_max]^K, whose optimum is this bang-bang rule.
    """
    if state.v > float(np.sum(state.q)):
        return np.full(state.q.shape, state.r_max)
    return np.zeros(state.q.shape)


def wmm_weights(state: WmmState, rates: RateMatrix, r_min) -> np.ndarray:
    """Assignment weights Q_k * r[k,n] / r_min_k (all entries >= 0)."""
    r_min = np.asarray(r_min, dtype=float)
    if np.any(r_min <= 0):
        raise ValueError("r_min must be > 0 entrywise")
    return (state.q / r_min)[:, None] * rates.bits


def wmm_queue_update(state: WmmState, realized, gamma, r_min) -> WmmState:
    """One step of Q_k <- max(Q_k - r_k/r_min_k + gamma_k_normalized, 0).

    ``gamma`` is in rate units as produced by ``wmm_aux_step`` and is scaled
    by R_max (or by r_min_k in "rmin" mode) so arrivals and the dimensionless
    service term live on a comparable scale.
    """
    realized = np.asarray(realized, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    r_min = np.asarray(r_min, dtype=float)
    if np.any(realized < 0) or np.any(gamma < 0):
        raise ValueError("realized rates and gamma must be >= 0")
    arrivals = gamma / state.r_max if state.gamma_norm == "rmax" else gamma / r_min
    q = np.maximum(state.q - realized / r_min + arrivals, 0.0)
    return replace(state, q=q)


def pf_weights(state: PfState, rates: RateMatrix) -> np.ndarray:
    """Assignment weights r[k,n] / ema_k."""
    return rates.bits / state.ema[:, None]


def pf_update(state: PfState, realized, beta: float) -> PfState:
    """ema_k <- max((1-beta) * ema_k + beta * r_k, floor), for every station.

    Unscheduled stations update with r_k = 0, so their weights recover as the
    average decays.
    """
    realized = np.asarray(realized, dtype=float)
    ema = np.maximum((1.0 - beta) * state.ema + beta * realized, state.epsilon_init)
    return replace(state, ema=ema)


def esrm_weights(state: EsrmState, rates: RateMatrix, r_min) -> np.ndarray:
    """Assignment weights V_ESR * r[k,n] + Z_k * (r[k,n] - r_min_k).

    Entries may be negative; the assignment solver never forces those pairs,
    so a station whose deficit queue has blown up simply goes unscheduled.
    """
    r_min = np.asarray(r_min, dtype=float)
    return state.v_esr * rates.bits + state.z[:, None] * (rates.bits - r_min[:, None])


def esrm_queue_update(state: EsrmState, realized, r_min) -> EsrmState:
    """One step of Z_k <- max(Z_k - r_k + r_min_k, 0)."""
    realized = np.asarray(realized, dtype=float)
    if np.any(realized < 0):
        raise ValueError("realized rates must be >= 0")
    z = np.maximum(state.z - realized + np.asarray(r_min, dtype=float), 0.0)
    return replace(state, z=z)


class WmmPolicy:
    """Weighted max-min drift-plus-penalty controller."""

    name = "wmm"

    def __init__(self, k_count: int, params: SimParams, v: float = 900.0, gamma_norm: str = "rmax"):
        self.state = WmmState(
            q=np.zeros(k_count),
            v=v,
            r_max=max_per_ru_rate(params),
            gamma_options=rate_options(params),
            gamma_norm=gamma_norm,
        )

    def weights(self, rates: RateMatrix, r_min) -> np.ndarray:
        return wmm_weights(self.state, rates, r_min)

    def update(self, realized, r_min) -> None:
        # auxiliary step uses the queues observed at the start of the period
        gamma = wmm_aux_step(self.state)
        self.state = wmm_queue_update(self.state, realized, gamma, r_min)

    @property
    def queues(self) -> np.ndarray:
        return self.state.q


class PfPolicy:
    """Proportional-fair controller."""

    name = "pf"

    def __init__(self, k_count: int, params: SimParams, beta: float = 0.01, epsilon_init: float = 1.0):
        del params  # signature kept uniform across policies
        self.state = PfState(ema=np.full(k_count, epsilon_init), beta=beta, epsilon_init=epsilon_init)

    def weights(self, rates: RateMatrix, r_min) -> np.ndarray:
        del r_min
        return pf_weights(self.state, rates)

    def update(self, realized, r_min) -> None:
        del r_min
        self.state = pf_update(self.state, realized, self.state.beta)

    @property
    def queues(self) -> np.ndarray:
        return self.state.ema


class EsrmPolicy:
    """Constrained ergodic sum-rate controller."""

    name = "esrm"

    def __init__(self, k_count: int, params: SimParams, v_esr: float = 10.0):
        del params
        self.state = EsrmState(z=np.zeros(k_count), v_esr=v_esr)

    def weights(self, rates: RateMatrix, r_min) -> np.ndarray:
        return esrm_weights(self.state, rates, r_min)

    def update(self, realized, r_min) -> None:
        self.state = esrm_queue_update(self.state, realized, r_min)

    @property
    def queues(self) -> np.ndarray:
        return self.state.z


def make_policy(
    name: str,
    k_count: int,
    params: SimParams,
    *,
    v: float = 900.0,
    v_esr: float = 10.0,
    beta: float = 0.01,
    pf_floor: float = 1.0,
    gamma_norm: str = "rmax",
):
    if name == "wmm":
        return WmmPolicy(k_count, params, v=v, gamma_norm=gamma_norm)
    if name == "pf":
        return PfPolicy(k_count, params, beta=beta, epsilon_init=pf_floor)
    if name == "esrm":
        return EsrmPolicy(k_count, params, v_esr=v_esr)
    raise ValueError(f"unknown policy {name!r} (choose from wmm, pf, esrm)")


def decide(
    policy,
    params: SimParams,
    net: NetworkRealization,
    channels,
) -> tuple[RuPattern, ScheduleMatrix, np.ndarray]:
    """Pick the RU pattern and schedule for one period, return realized rates.

    ``channels`` holds one ChannelState per configured pattern (index
    aligned with ``params.patterns``). The policy's weights are computed for
    each pattern, the assignment problem is solved per pattern, and the
    pattern with the strictly largest objective value wins. The caller is
    responsible for invoking ``policy.update`` with the realized rates
    afterwards.
    """
    if len(channels) != len(params.patterns):
        raise ValueError(f"need one channel state per pattern, got {len(channels)} for {len(params.patterns)}")
    r_min = net.r_mins
    best = None
    for pat, ch in zip(params.patterns, channels):
        rates = rate_matrix(params, net, ch, pat)
        w = policy.weights(rates, r_min)
        schedule = max_weight_assignment(w)
        value = assignment_value(w, schedule)
        if best is None or value > best[0]:
            best = (value, pat, schedule, rates)
    _, pat, schedule, rates = best
    realized = (schedule.assign * rates.bits).sum(axis=1)
    return pat, schedule, realized
