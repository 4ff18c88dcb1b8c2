"""Scheduling library and Monte-Carlo simulator for 802.11ax downlink OFDMA."""

from .assignment import assignment_value, brute_force_assignment, max_weight_assignment
from .channel import (
    NetworkRealization,
    bits_per_period,
    draw_fading,
    path_loss,
    place_stations,
    rate_matrix,
    received_power_dbm,
    select_mcs,
)
from .domain import (
    DEFAULT_MCS_TABLE,
    MULTI_PATTERNS,
    SINGLE_PATTERNS,
    ChannelState,
    DropResult,
    McsEntry,
    RateMatrix,
    RuPattern,
    ScheduleMatrix,
    SimParams,
    StationConfig,
    station_rate,
    validate_schedule,
)
from .policies import (
    EsrmPolicy,
    EsrmState,
    PfPolicy,
    PfState,
    WmmPolicy,
    WmmState,
    decide,
    esrm_queue_update,
    esrm_weights,
    make_policy,
    max_per_ru_rate,
    pf_update,
    pf_weights,
    wmm_aux_step,
    wmm_queue_update,
    wmm_weights,
)
from .sim import (
    CampaignConfig,
    CampaignResult,
    SweepPoint,
    empirical_cdf,
    fraction_below,
    run_campaign,
    run_drop,
    scaling_sweep,
)

__version__ = "0.1.0"
