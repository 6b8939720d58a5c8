"""Minimum-length TDMA scheduling for full-duplex wireless-powered networks."""

from .lambertw import Branch, DomainError, lambert_w, lambert_w_lower_log
from .model import (
    EhParams,
    SystemParams,
    UserProfile,
    harvest_rate,
    min_transmission_time,
    rate_bps,
    sinr_gain,
)
from .netgen import (
    Realization,
    StatisticalFailure,
    TopologyParams,
    UserTemplate,
    generate,
    mean_gain_check,
    read_instance,
    write_instance,
)
from .penalty import (
    NeverAffordable,
    PenaltyPoint,
    ZERO_PENALTY_TOL,
    end_time,
    penalty,
    penalty_point,
    zero_penalty_start,
)
from .power import (
    Allocation,
    InfeasibleUser,
    NumericalError,
    Schedule,
    StartState,
    bisection_oracle,
    evaluate_order,
    evaluate_order_pca,
    optimal_power,
    start_state,
)
from .schedulers import SearchNode, SizeCapExceeded, bfa, fixed_order, fpa, mpa, mtpa
from .sweep import (
    Config,
    ConfigError,
    SweepResult,
    SweepSpec,
    emit_csv,
    load_config,
    run_sweep,
    validate_schedule,
)

__version__ = "0.1.0"
