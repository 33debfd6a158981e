"""Closed-form secrecy analysis of the decode-and-forward massive-MIMO relay.

Every function here is pure and operates on the hardened (large N_R)
channel model: ``||h||^2 ~ N_R`` on the legitimate links and a unit-mean
exponential projection gain towards the eavesdropper.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .exceptions import InfeasibleError, ParameterError
from .params import SystemParams, derive

__all__ = [
    "Regime",
    "SocValue",
    "AllocationResult",
    "legitimate_snr_cf",
    "legitimate_capacity_cf",
    "secrecy_outage_capacity",
    "secrecy_outage_capacity_piecewise",
    "secrecy_outage_probability_cf",
    "feasibility",
    "min_antennas",
    "regime",
    "max_secrecy_outage_capacity",
    "optimal_power_soc",
    "interception_probability_cf",
    "optimal_power_ip",
    "soc_saturation_limit",
]


class Regime(str, enum.Enum):
    SOURCE_LIMITED = "source_limited"
    CEILING_LIMITED = "ceiling_limited"


@dataclass(frozen=True)
class SocValue:
    c_soc: float
    clamped: float
    feasible: bool


@dataclass(frozen=True)
class AllocationResult:
    """Relay power chosen by an allocation rule and the metric it achieves."""

    p_r_star: float
    regime: Regime
    objective_value: float
    feasible: bool = True


def _check_power(p_r: float, *, strict: bool = False) -> float:
    p_r = float(p_r)
    if not math.isfinite(p_r) or p_r < 0 or (strict and p_r == 0):
        bound = "> 0" if strict else ">= 0"
        raise ParameterError(f"relay power must be finite and {bound}, got {p_r!r}")
    return p_r


def legitimate_snr_cf(params: SystemParams, p_r: float) -> float:
    """Hardened end-to-end SNR ``min(P_S alpha_sr N_R, P_R alpha_rd rho N_R)``."""
    p_r = _check_power(p_r)
    return min(params.p_s * params.alpha_sr * params.n_r,
               p_r * params.alpha_rd * params.rho * params.n_r)


def legitimate_capacity_cf(params: SystemParams, p_r: float) -> float:
    """Hardened legitimate capacity C_D in bits/s."""
    return params.w_hz * math.log2(1.0 + legitimate_snr_cf(params, p_r))


def secrecy_outage_capacity(params: SystemParams, p_r: float) -> SocValue:
    """Secrecy outage capacity at relay power `p_r` for outage bound ``params.epsilon``.

    ``C_soc = W log2(1 + min(B, P_R A)) - W log2(1 - P_R alpha_re ln eps)``.
    The raw value may be negative; `clamped` applies ``max(., 0)``.
    """
    d = derive(params)
    c_d = legitimate_capacity_cf(params, p_r)
    c_soc = c_d - params.w_hz * math.log2(1.0 - p_r * params.alpha_re * math.log(params.epsilon))
    return SocValue(c_soc=c_soc, clamped=max(c_soc, 0.0), feasible=d.r_l < 1.0)


def secrecy_outage_capacity_piecewise(params: SystemParams, p_r: float) -> float:
    """Raw C_soc written in the ``A, B, r_l`` shorthand, branch chosen by B vs P_R A."""
    p_r = _check_power(p_r)
    d = derive(params)
    w = params.w_hz
    if d.b < p_r * d.a:
        return w * math.log2(1.0 + d.b) - w * math.log2(1.0 + p_r * d.a * d.r_l)
    return w * math.log2(1.0 + p_r * d.a) - w * math.log2(1.0 + p_r * d.a * d.r_l)


def secrecy_outage_probability_cf(params: SystemParams, p_r: float, c_target: float,
                                  exact_source_term: bool = False) -> float:
    """Probability that the secrecy rate drops below `c_target` (bits/s).

    By default the large-N_R form ``exp(-(2^((C_D - C)/W) - 1)/(P_R alpha_re))``
    is returned. With ``exact_source_term=True`` the term accounting for the
    eavesdropper being capped by the source-relay hop is kept as well.
    """
    p_r = _check_power(p_r, strict=True)
    snr_e = p_r * params.alpha_re
    c_d = legitimate_capacity_cf(params, p_r)
    threshold = 2.0 ** ((c_d - c_target) / params.w_hz) - 1.0
    tail = math.exp(-threshold / snr_e) if threshold > 0 else 1.0
    if not exact_source_term:
        return tail
    cap = math.exp(-params.p_s * params.alpha_sr * params.n_r / snr_e)
    return cap + (1.0 - cap) * tail


def feasibility(params: SystemParams) -> bool:
    """True iff a nonnegative secrecy outage capacity exists, i.e. ``r_l < 1``."""
    return derive(params).r_l < 1.0


def min_antennas(params: SystemParams) -> int:
    """Smallest antenna count strictly above ``-alpha_re ln(eps) / (rho alpha_rd)``."""
    derive(params)
    bound = -params.alpha_re * math.log(params.epsilon) / (params.rho * params.alpha_rd)
    return math.floor(bound) + 1


def regime(params: SystemParams) -> Regime:
    if params.source_limited_power <= params.p_max:
        return Regime.SOURCE_LIMITED
    return Regime.CEILING_LIMITED


def _joint_optimal_power(params: SystemParams) -> float:
    derive(params)
    return min(params.source_limited_power, params.p_max)


def max_secrecy_outage_capacity(params: SystemParams) -> float:
    """Raw C_soc at the power returned by :func:`optimal_power_soc`."""
    p_r = _joint_optimal_power(params)
    d = derive(params)
    w = params.w_hz
    return w * math.log2(1.0 + p_r * d.a) - w * math.log2(1.0 + p_r * d.a * d.r_l)


def optimal_power_soc(params: SystemParams) -> AllocationResult:
    """Relay power maximizing the secrecy outage capacity under ``P_R <= P_max``.

    Raises
    ------
    InfeasibleError
        If ``r_l >= 1``: no relay power yields a nonnegative secrecy capacity.
    """
    if not feasibility(params):
        raise InfeasibleError(
            f"no nonnegative secrecy capacity: r_l = {derive(params).r_l:.6g} >= 1 "
            f"(need n_r >= {min_antennas(params)})")
    return AllocationResult(
        p_r_star=_joint_optimal_power(params),
        regime=regime(params),
        objective_value=max_secrecy_outage_capacity(params),
    )


def interception_probability_cf(params: SystemParams, p_r: float) -> float:
    """Closed-form probability that ``C_D < C_E`` at relay power `p_r`.

    ``P_0 = exp(-(2^(C_D/W) - 1) / (P_R alpha_re))``; the SNR inside the
    exponent is taken directly rather than through ``2^(C_D/W)`` to avoid
    round-off.
    """
    p_r = _check_power(p_r, strict=True)
    return math.exp(-legitimate_snr_cf(params, p_r) / (p_r * params.alpha_re))


def optimal_power_ip(params: SystemParams) -> tuple[float, float]:
    """Interception-optimal region ``(0, upper]`` and the minimum probability.

    Every power in the region attains ``exp(-rho alpha_rd N_R / alpha_re)``.
    The upper endpoint is returned because it also maximizes the secrecy
    outage capacity, making it the recommended operating point.
    """
    if params.p_s <= 0:
        raise ParameterError("p_s = 0 leaves the interception-optimal region empty")
    upper = _joint_optimal_power(params)
    p0_min = math.exp(-params.rho * params.alpha_rd * params.n_r / params.alpha_re)
    return upper, p0_min


def soc_saturation_limit(params: SystemParams) -> float:
    """High-P_S limit of the maximum secrecy outage capacity, bits/s."""
    if not feasibility(params):
        raise InfeasibleError(f"no saturation limit: r_l = {derive(params).r_l:.6g} >= 1")
    d = derive(params)
    w = params.w_hz
    p = params.p_max
    return w * math.log2(1.0 + p * d.a) - w * math.log2(1.0 + p * d.a * d.r_l)
