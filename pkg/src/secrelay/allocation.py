"""Relay power allocation strategies compared in the experiments."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import analytics
from .analytics import AllocationResult
from .exceptions import ParameterError
from .params import SystemParams

__all__ = ["StrategyKind", "Strategy", "SOC_MAX", "IP_MIN", "allocate"]


class StrategyKind(str, enum.Enum):
    SOC_MAX = "socmax"
    IP_MIN = "ipmin"
    FIXED = "fixed"


@dataclass(frozen=True)
class Strategy:
    kind: StrategyKind
    p_r: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", StrategyKind(self.kind))
        if self.kind is StrategyKind.FIXED:
            if self.p_r is None or not math.isfinite(self.p_r) or self.p_r <= 0:
                raise ParameterError(f"fixed strategy needs a power > 0, got {self.p_r!r}")
            object.__setattr__(self, "p_r", float(self.p_r))
        elif self.p_r is not None:
            raise ParameterError(f"{self.kind.value} strategy does not take a power")

    @classmethod
    def fixed(cls, p_r: float) -> "Strategy":
        return cls(StrategyKind.FIXED, p_r)

    @property
    def label(self) -> str:
        if self.kind is StrategyKind.FIXED:
            return f"fixed({self.p_r!r})"
        return self.kind.value


SOC_MAX = Strategy(StrategyKind.SOC_MAX)
IP_MIN = Strategy(StrategyKind.IP_MIN)


def allocate(strategy: Strategy, params: SystemParams) -> AllocationResult:
    """Pick the relay power for `strategy` and evaluate its objective.

    SOC_MAX and IP_MIN both return ``min(P_S alpha_sr / (rho alpha_rd), P_max)``;
    that point is interception-optimal and also maximizes the secrecy outage
    capacity. SOC_MAX and FIXED report the clamped secrecy outage capacity,
    IP_MIN the interception probability. When ``r_l >= 1`` the SOC_MAX result
    is flagged infeasible with a zero objective instead of raising.
    """
    regime = analytics.regime(params)
    feasible = analytics.feasibility(params)
    if strategy.kind is StrategyKind.FIXED:
        if strategy.p_r > params.p_max:
            raise ParameterError(
                f"fixed power {strategy.p_r!r} exceeds p_max {params.p_max!r}")
        soc = analytics.secrecy_outage_capacity(params, strategy.p_r)
        return AllocationResult(strategy.p_r, regime, soc.clamped, feasible)
    if strategy.kind is StrategyKind.IP_MIN:
        p_r, p0_min = analytics.optimal_power_ip(params)
        return AllocationResult(p_r, regime, p0_min, feasible)
    p_r = min(params.source_limited_power, params.p_max)
    objective = max(analytics.max_secrecy_outage_capacity(params), 0.0) if feasible else 0.0
    return AllocationResult(p_r, regime, objective, feasible)
