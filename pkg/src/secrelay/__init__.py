"""Secrecy outage analysis and relay power allocation for a decode-and-forward
massive-MIMO relay, with a Monte Carlo simulator to check the closed forms."""

from ._kernels import BACKEND
from .allocation import IP_MIN, SOC_MAX, Strategy, StrategyKind, allocate
from .analytics import (
    AllocationResult,
    Regime,
    SocValue,
    feasibility,
    interception_probability_cf,
    legitimate_capacity_cf,
    max_secrecy_outage_capacity,
    min_antennas,
    optimal_power_ip,
    optimal_power_soc,
    secrecy_outage_capacity,
    soc_saturation_limit,
)
from .exceptions import (
    DegenerateCSIError,
    InfeasibleError,
    InsufficientTrialsError,
    ParameterError,
    SecrelayError,
)
from .params import DerivedConstants, SystemParams, derive, from_db, to_db

__version__ = "0.1.0"
