"""Parameter sweeps reproducing the secrecy-performance figures.

Each sweep walks one axis of :class:`SystemParams`, applies every strategy
and outage bound at each grid point and records the closed-form values next
to optional Monte Carlo estimates. Records are emitted in grid order and
written as RFC 4180 CSV plus a JSON metadata sidecar.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import json
import math
import os
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _kernels, analytics, montecarlo
from .allocation import IP_MIN, SOC_MAX, Strategy, StrategyKind, allocate
from .exceptions import ParameterError
from .montecarlo import McEstimate
from .params import SystemParams, from_db

__all__ = [
    "Axis",
    "MonteCarloConfig",
    "SweepSpec",
    "SweepRecord",
    "FIGURE_COLUMNS",
    "run_sweep",
    "run_fig2",
    "run_fig3_fig4",
    "run_fig5_fig6",
    "default_spec",
    "run_figure",
    "write_csv",
    "write_metadata",
]

DEFAULT_POINTS = 25
DEFAULT_TRIALS = 100_000
DEFAULT_SEED = 20160101


class Axis(str, enum.Enum):
    ALPHA_RE = "alpha_re"
    ALPHA_RD = "alpha_rd"
    SOURCE_SNR_DB = "snr_s_db"

    def apply(self, base: SystemParams, value: float) -> SystemParams:
        if self is Axis.SOURCE_SNR_DB:
            return base.replace(p_s=from_db(value))
        return base.replace(**{self.value: float(value)})


@dataclass(frozen=True)
class MonteCarloConfig:
    n_trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED


@dataclass(frozen=True)
class SweepSpec:
    base: SystemParams
    axis: Axis
    grid: tuple
    strategies: tuple = (SOC_MAX,)
    epsilons: tuple = ()
    mc: MonteCarloConfig | None = None

    def __post_init__(self):
        object.__setattr__(self, "axis", Axis(self.axis))
        grid = tuple(float(g) for g in self.grid)
        if not grid:
            raise ParameterError("sweep grid is empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ParameterError("sweep grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        eps = tuple(float(e) for e in self.epsilons) or (self.base.epsilon,)
        if not all(0.0 < e < 1.0 for e in eps):
            raise ParameterError(f"epsilons must lie in (0, 1), got {eps}")
        object.__setattr__(self, "epsilons", eps)
        if not self.strategies:
            raise ParameterError("at least one strategy is required")
        object.__setattr__(self, "strategies", tuple(self.strategies))

    def to_dict(self) -> dict:
        return {
            "base": dataclasses.asdict(self.base),
            "axis": self.axis.value,
            "grid": list(self.grid),
            "strategies": [s.label for s in self.strategies],
            "epsilons": list(self.epsilons),
            "mc": None if self.mc is None else dataclasses.asdict(self.mc),
        }


@dataclass(frozen=True)
class SweepRecord:
    axis_value: float
    strategy: str
    epsilon: float
    p_r_used: float
    c_soc_theory: float
    p0_theory: float
    alpha_re: float
    c_soc_mc: McEstimate | None = None
    p0_mc: McEstimate | None = None


def _theory(params: SystemParams, strategy: Strategy) -> tuple[float, float, float]:
    p_r = allocate(strategy, params).p_r_star
    c_soc = analytics.secrecy_outage_capacity(params, p_r).clamped
    p0 = analytics.interception_probability_cf(params, p_r) if p_r > 0 else math.nan
    return p_r, c_soc, p0


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[SweepRecord]:
    """Evaluate every (grid value, strategy, epsilon) combination in grid order.

    All grid points share the same Monte Carlo channel draws (common random
    numbers): the draws depend only on ``n_r``, ``rho``, the trial count and
    the seed, none of which is swept.
    """
    records = []
    for value in spec.grid:
        point = spec.axis.apply(spec.base, value)
        for strategy in spec.strategies:
            for eps in spec.epsilons:
                params = point.replace(epsilon=eps)
                p_r, c_soc, p0 = _theory(params, strategy)
                c_mc = p0_mc = None
                if spec.mc is not None:
                    n, seed = spec.mc.n_trials, spec.mc.seed
                    c_mc = montecarlo.empirical_outage_capacity(params, p_r, n, seed,
                                                                workers=workers)
                    p0_mc = montecarlo.estimate_interception_probability(params, p_r, n, seed,
                                                                         workers=workers)
                records.append(SweepRecord(
                    axis_value=value, strategy=strategy.label, epsilon=eps, p_r_used=p_r,
                    c_soc_theory=c_soc, p0_theory=p0, alpha_re=params.alpha_re,
                    c_soc_mc=c_mc, p0_mc=p0_mc))
    return records


def _require_axis(spec: SweepSpec, axis: Axis) -> None:
    if spec.axis is not axis:
        raise ParameterError(f"this figure sweeps {axis.value}, got {spec.axis.value}")


def run_fig2(spec: SweepSpec, workers: int | None = None) -> list[SweepRecord]:
    """Closed form vs simulated secrecy outage capacity over alpha_re at fixed relay power."""
    _require_axis(spec, Axis.ALPHA_RE)
    if any(s.kind is not StrategyKind.FIXED for s in spec.strategies):
        raise ParameterError("the alpha_re comparison uses a fixed relay power")
    return run_sweep(spec, workers)


def run_fig3_fig4(spec: SweepSpec, workers: int | None = None) -> list[SweepRecord]:
    """Optimal vs fixed allocation over alpha_rd."""
    _require_axis(spec, Axis.ALPHA_RD)
    return run_sweep(spec, workers)


def run_fig5_fig6(spec: SweepSpec, workers: int | None = None) -> list[SweepRecord]:
    """Maximum secrecy outage capacity and minimum interception probability over SNR_S."""
    _require_axis(spec, Axis.SOURCE_SNR_DB)
    if spec.base.alpha_rd != 1.0:
        raise ParameterError("the asymptotic sweep is defined for alpha_rd = 1")
    return run_sweep(spec, workers)


def default_spec(figure: int, base: SystemParams,
                 mc: MonteCarloConfig | None = None) -> SweepSpec:
    """Grid and strategies used for `figure` when none are given explicitly."""
    if figure == 2:
        return SweepSpec(base, Axis.ALPHA_RE, tuple(np.linspace(1.0, 10.0, DEFAULT_POINTS)),
                         strategies=(Strategy.fixed(from_db(10.0)),),
                         epsilons=(0.01, 0.05, 0.1), mc=mc)
    if figure in (3, 4):
        return SweepSpec(base, Axis.ALPHA_RD, tuple(np.geomspace(0.1, 10.0, DEFAULT_POINTS)),
                         strategies=(SOC_MAX, Strategy.fixed(base.p_max)), mc=mc)
    if figure in (5, 6):
        strategy = SOC_MAX if figure == 5 else IP_MIN
        return SweepSpec(base.replace(alpha_rd=1.0), Axis.SOURCE_SNR_DB,
                         tuple(np.linspace(-40.0, 40.0, DEFAULT_POINTS)),
                         strategies=(strategy,), mc=mc)
    raise ParameterError(f"unknown figure {figure!r}; expected 2..6")


_RUNNERS: dict[int, Callable] = {2: run_fig2, 3: run_fig3_fig4, 4: run_fig3_fig4,
                                 5: run_fig5_fig6, 6: run_fig5_fig6}


def run_figure(figure: int, spec: SweepSpec, workers: int | None = None) -> list[SweepRecord]:
    if figure not in _RUNNERS:
        raise ParameterError(f"unknown figure {figure!r}; expected 2..6")
    return _RUNNERS[figure](spec, workers)


def _fmt_float(x: float) -> str:
    return repr(float(x))


def _fmt_prob(x: float) -> str:
    return f"{x:.10e}"


def _mc_value(est, fmt):
    return "" if est is None else fmt(est.value)


def _mc_err(est, fmt):
    return "" if est is None else fmt(est.std_error)


_CELLS: dict[str, Callable[[SweepRecord], str]] = {
    "alpha_re": lambda r: _fmt_float(r.alpha_re),
    "epsilon": lambda r: _fmt_float(r.epsilon),
    "strategy": lambda r: r.strategy,
    "p_r": lambda r: _fmt_float(r.p_r_used),
    "c_soc_theory": lambda r: _fmt_float(r.c_soc_theory),
    "c_soc_mc": lambda r: _mc_value(r.c_soc_mc, _fmt_float),
    "c_soc_mc_stderr": lambda r: _mc_err(r.c_soc_mc, _fmt_float),
    "p0_theory": lambda r: _fmt_prob(r.p0_theory),
    "p0_mc": lambda r: _mc_value(r.p0_mc, _fmt_prob),
    "p0_mc_stderr": lambda r: _mc_err(r.p0_mc, _fmt_prob),
}

FIGURE_COLUMNS: dict[int, tuple[str, ...]] = {
    2: ("alpha_re", "epsilon", "c_soc_theory", "c_soc_mc", "c_soc_mc_stderr"),
    3: ("alpha_rd", "strategy", "p_r", "c_soc_theory", "c_soc_mc", "c_soc_mc_stderr"),
    4: ("alpha_rd", "strategy", "p_r", "p0_theory", "p0_mc", "p0_mc_stderr"),
    5: ("alpha_re", "snr_s_db", "strategy", "p_r", "c_soc_theory", "c_soc_mc", "c_soc_mc_stderr"),
    6: ("alpha_re", "snr_s_db", "strategy", "p_r", "p0_theory", "p0_mc", "p0_mc_stderr"),
}


def write_csv(records: Sequence[SweepRecord], figure: int, path: str | os.PathLike,
              axis: Axis) -> None:
    """Write `records` with the column set of `figure`; absent MC cells are empty."""
    columns = FIGURE_COLUMNS[figure]
    cells = dict(_CELLS)
    cells[axis.value] = lambda r: _fmt_float(r.axis_value)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
        writer.writerow(columns)
        for rec in records:
            writer.writerow([cells[c](rec) for c in columns])


def write_metadata(specs: Sequence[SweepSpec], figure: int, path: str | os.PathLike) -> None:
    meta = {
        "figure": figure,
        "columns": list(FIGURE_COLUMNS[figure]),
        "sweeps": [s.to_dict() for s in specs],
        "seed": None if specs[0].mc is None else specs[0].mc.seed,
        "kernel_backend": _kernels.BACKEND,
        "block_size": montecarlo.BLOCK_SIZE,
        "units": {"c_soc": "bits/s", "p_r": "linear", "p0": "probability"},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
