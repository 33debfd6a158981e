"""Monte Carlo channel simulator used as the independent oracle for the closed forms.

Fading vectors are drawn with full antenna dimension and the capacities are
computed without any hardening approximation.

Seeding: a 64-bit master seed keys a Philox counter-based generator. Trials
are grouped in fixed blocks of :data:`BLOCK_SIZE`; block ``b`` starts at
counter ``b << 192``. Trial ``i`` is therefore a pure function of
``(seed, i)`` and results do not depend on how blocks are spread over
workers.
"""

from __future__ import annotations

import math
import os
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exceptions import InsufficientTrialsError, ParameterError
from .params import SystemParams

__all__ = [
    "BLOCK_SIZE",
    "MIN_TRIALS",
    "ChannelDraw",
    "CapacitySample",
    "GainSample",
    "McEstimate",
    "block_stream",
    "draw_channel",
    "trial_draw",
    "sample_gains",
    "clear_cache",
    "capacities",
    "exact_capacities",
    "estimate_outage_probability",
    "empirical_outage_capacity",
    "estimate_interception_probability",
]

BLOCK_SIZE = 4096
MIN_TRIALS = 1000
_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class ChannelDraw:
    """One fading realization; all four vectors have length N_R."""

    h_sr: np.ndarray
    h_rd_hat: np.ndarray
    e: np.ndarray
    h_re: np.ndarray

    def h_rd(self, rho: float) -> np.ndarray:
        """True relay-destination channel ``sqrt(rho) h_rd_hat + sqrt(1-rho) e``."""
        return math.sqrt(rho) * self.h_rd_hat + math.sqrt(1.0 - rho) * self.e

    @property
    def mrt_vector(self) -> np.ndarray:
        return self.h_rd_hat / np.linalg.norm(self.h_rd_hat)


@dataclass(frozen=True)
class CapacitySample:
    """Exact capacities in bits/s; fields are floats or equally shaped arrays."""

    c_sr: np.ndarray
    c_rd: np.ndarray
    c_re: np.ndarray
    c_d: np.ndarray
    c_e: np.ndarray

    @property
    def secrecy_rate(self):
        return self.c_d - self.c_e


@dataclass(frozen=True)
class GainSample:
    """Per-trial channel gains; independent of powers, path losses and W."""

    g_sr: np.ndarray
    g_rd: np.ndarray
    g_re: np.ndarray
    n_r: int
    rho: float
    seed: int

    @property
    def n_trials(self) -> int:
        return self.g_sr.shape[0]


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    n_trials: int
    seed: int
    method: str = "binomial"

    def to_dict(self) -> dict:
        return {"value": self.value, "std_error": self.std_error,
                "n_trials": self.n_trials, "seed": self.seed, "method": self.method}


def _check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ParameterError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ParameterError(f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


def block_stream(seed: int, block: int) -> np.random.Generator:
    """Generator for trial block `block` under master `seed`."""
    seed = _check_seed(seed)
    return np.random.Generator(np.random.Philox(key=seed, counter=int(block) << 192))


def _to_draw(z: np.ndarray) -> ChannelDraw:
    h = (z[..., 0] + 1j * z[..., 1]) * _SQRT_HALF
    return ChannelDraw(h_sr=h[0], h_rd_hat=h[1], e=h[2], h_re=h[3])


def draw_channel(params: SystemParams, stream: np.random.Generator) -> ChannelDraw:
    """Draw one realization of the four i.i.d. CN(0, 1) vectors from `stream`.

    Consecutive calls consume the stream exactly as one batched block would,
    so ``draw_channel`` repeated ``k`` times on :func:`block_stream` yields
    the first ``k`` trials of that block.
    """
    return _to_draw(stream.standard_normal((4, params.n_r, 2)))


def trial_draw(params: SystemParams, seed: int, index: int) -> ChannelDraw:
    """Reconstruct the realization used by trial `index` under `seed`."""
    if index < 0:
        raise ParameterError(f"trial index must be >= 0, got {index}")
    block, offset = divmod(int(index), BLOCK_SIZE)
    z = block_stream(seed, block).standard_normal((offset + 1, 4, params.n_r, 2))
    return _to_draw(z[offset])


def _block_gains(n_r, rho, seed, block, count):
    z = block_stream(seed, block).standard_normal((count, 4, n_r, 2))
    return _kernels.projection_gains(z, rho)


def _default_workers() -> int:
    env = os.environ.get("SECRELAY_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


_GAIN_CACHE: "OrderedDict[tuple, GainSample]" = OrderedDict()
_GAIN_CACHE_SIZE = 4


def _simulate_gains(n_r: int, rho: float, n_trials: int, seed: int, workers: int) -> GainSample:
    n_blocks = -(-n_trials // BLOCK_SIZE)
    counts = [min(BLOCK_SIZE, n_trials - b * BLOCK_SIZE) for b in range(n_blocks)]
    out = np.empty((3, n_trials))

    def work(b):
        start = b * BLOCK_SIZE
        gains = _block_gains(n_r, rho, seed, b, counts[b])
        for row, g in enumerate(gains):
            out[row, start:start + counts[b]] = g

    if workers <= 1 or n_blocks == 1:
        for b in range(n_blocks):
            work(b)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, range(n_blocks)))
    out.setflags(write=False)
    return GainSample(g_sr=out[0], g_rd=out[1], g_re=out[2], n_r=n_r, rho=rho, seed=seed)


def sample_gains(params: SystemParams, n_trials: int, seed: int,
                 workers: int | None = None) -> GainSample:
    """Simulate `n_trials` realizations and reduce them to per-trial gains.

    The result depends only on ``(params.n_r, params.rho, n_trials, seed)``,
    so sweeps over powers or path losses reuse the same draws.
    """
    if isinstance(n_trials, bool) or int(n_trials) != n_trials or n_trials < 1:
        raise ParameterError(f"n_trials must be a positive integer, got {n_trials!r}")
    seed = _check_seed(seed)
    workers = _default_workers() if workers is None else max(1, int(workers))
    key = (params.n_r, params.rho, int(n_trials), seed)
    if key in _GAIN_CACHE:
        _GAIN_CACHE.move_to_end(key)
        return _GAIN_CACHE[key]
    gains = _simulate_gains(*key, workers)
    _GAIN_CACHE[key] = gains
    while len(_GAIN_CACHE) > _GAIN_CACHE_SIZE:
        _GAIN_CACHE.popitem(last=False)
    return gains


def clear_cache() -> None:
    """Drop memoized gain samples."""
    _GAIN_CACHE.clear()


def capacities(params: SystemParams, p_r: float, g_sr, g_rd, g_re) -> CapacitySample:
    """Map channel gains to exact decode-and-forward capacities.

    The eavesdropper can decode no more than the relay did, so
    ``c_e = min(c_sr, c_re)`` just as ``c_d = min(c_sr, c_rd)``.
    """
    if p_r < 0:
        raise ParameterError(f"relay power must be >= 0, got {p_r!r}")
    w = params.w_hz
    c_sr = w * np.log2(1.0 + params.p_s * params.alpha_sr * np.asarray(g_sr))
    c_rd = w * np.log2(1.0 + p_r * params.alpha_rd * np.asarray(g_rd))
    c_re = w * np.log2(1.0 + p_r * params.alpha_re * np.asarray(g_re))
    return CapacitySample(c_sr=c_sr, c_rd=c_rd, c_re=c_re,
                          c_d=np.minimum(c_sr, c_rd), c_e=np.minimum(c_sr, c_re))


def exact_capacities(params: SystemParams, p_r: float, draw: ChannelDraw) -> CapacitySample:
    """Capacities of a single realization, returned as floats."""
    vecs = (draw.h_sr, draw.h_rd_hat, draw.e, draw.h_re)
    if any(np.ndim(v) != 1 or len(v) != params.n_r for v in vecs):
        raise ParameterError(
            f"channel draw lengths {[np.shape(v) for v in vecs]} do not match n_r={params.n_r}")
    z = np.empty((1, 4, params.n_r, 2))
    for i, v in enumerate(vecs):
        z[0, i, :, 0] = v.real / _SQRT_HALF
        z[0, i, :, 1] = v.imag / _SQRT_HALF
    g_sr, g_rd, g_re = _kernels.projection_gains(z, params.rho)
    cap = capacities(params, p_r, g_sr, g_rd, g_re)
    return CapacitySample(*(float(getattr(cap, f)[0]) for f in ("c_sr", "c_rd", "c_re", "c_d", "c_e")))


def _secrecy_rates(params, p_r, n_trials, seed, workers):
    g = sample_gains(params, n_trials, seed, workers)
    return capacities(params, p_r, g.g_sr, g.g_rd, g.g_re)


def _proportion(hits: np.ndarray, n: int, seed: int) -> McEstimate:
    p = float(np.count_nonzero(hits)) / n
    return McEstimate(value=p, std_error=math.sqrt(p * (1.0 - p) / n), n_trials=n, seed=seed)


def _require_trials(n_trials):
    if n_trials < MIN_TRIALS:
        raise InsufficientTrialsError(f"need at least {MIN_TRIALS} trials, got {n_trials}")


def estimate_outage_probability(params: SystemParams, p_r: float, c_target: float,
                                n_trials: int, seed: int,
                                workers: int | None = None) -> McEstimate:
    """Fraction of trials whose secrecy rate falls below `c_target` bits/s."""
    _require_trials(n_trials)
    cap = _secrecy_rates(params, p_r, n_trials, seed, workers)
    return _proportion(cap.secrecy_rate < c_target, n_trials, seed)


def empirical_outage_capacity(params: SystemParams, p_r: float, n_trials: int, seed: int,
                              epsilon: float | None = None,
                              workers: int | None = None) -> McEstimate:
    """Lower epsilon-quantile of the exact secrecy rate.

    The estimate is the ascending order statistic of rank ``ceil(eps*n)``;
    negative rates are kept. The standard error is half the spread between
    the order statistics one binomial standard deviation
    ``sqrt(n eps (1-eps))`` below and above that rank.
    """
    eps = params.epsilon if epsilon is None else float(epsilon)
    if not 0.0 < eps < 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1), got {eps!r}")
    if n_trials * eps < 100:
        raise InsufficientTrialsError(
            f"n_trials * epsilon = {n_trials * eps:g} < 100: too few tail samples")
    rates = _secrecy_rates(params, p_r, n_trials, seed, workers).secrecy_rate
    rank = math.ceil(eps * n_trials) - 1
    spread = math.ceil(math.sqrt(n_trials * eps * (1.0 - eps)))
    lo, hi = max(rank - spread, 0), min(rank + spread, n_trials - 1)
    part = np.partition(rates, sorted({lo, rank, hi}))
    return McEstimate(value=float(part[rank]), std_error=float(part[hi] - part[lo]) / 2.0,
                      n_trials=n_trials, seed=seed, method="order-statistic band")


def estimate_interception_probability(params: SystemParams, p_r: float, n_trials: int,
                                      seed: int, workers: int | None = None) -> McEstimate:
    """Fraction of trials in which the eavesdropper capacity exceeds the legitimate one."""
    _require_trials(n_trials)
    cap = _secrecy_rates(params, p_r, n_trials, seed, workers)
    return _proportion(cap.c_d < cap.c_e, n_trials, seed)
