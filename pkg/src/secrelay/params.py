"""System constants of the two-hop relay link and the shorthand derived from them.

All powers are linear with the noise variance normalized to one. Decibel
values only appear at the CLI boundary through :func:`from_db` and
:func:`to_db`.
"""

from __future__ import annotations

import dataclasses
import math
import numbers
from dataclasses import dataclass

from .exceptions import DegenerateCSIError, ParameterError

__all__ = ["SystemParams", "DerivedConstants", "from_db", "to_db", "derive"]


def from_db(value_db: float) -> float:
    """Convert a decibel value to linear power, ``10**(value_db/10)``."""
    value_db = float(value_db)
    if not math.isfinite(value_db):
        raise ParameterError(f"dB value must be finite, got {value_db!r}")
    return 10.0 ** (value_db / 10.0)


def to_db(value: float) -> float:
    """Convert a positive linear power to decibels."""
    if value <= 0:
        raise ParameterError(f"cannot express {value!r} in dB")
    return 10.0 * math.log10(value)


def _positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0):
        raise ParameterError(f"{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class SystemParams:
    """Scalar constants of the relay system.

    Parameters
    ----------
    n_r : int
        Number of relay antennas.
    w_hz : float
        Spectral bandwidth in Hz.
    rho : float
        Correlation between estimated and true relay-destination channel.
    epsilon : float
        Secrecy outage probability bound, in the open interval (0, 1).
    p_s : float
        Source transmit power (linear).
    p_max : float
        Relay power ceiling (linear).
    alpha_sr, alpha_rd, alpha_re : float
        Path-loss gains of the source-relay, relay-destination and
        relay-eavesdropper links.
    """

    n_r: int = 100
    w_hz: float = 1e4
    rho: float = 0.9
    epsilon: float = 0.01
    p_s: float = 10.0
    p_max: float = 10.0**1.5
    alpha_sr: float = 1.0
    alpha_rd: float = 1.0
    alpha_re: float = 5.0

    def __post_init__(self):
        if isinstance(self.n_r, bool) or not isinstance(self.n_r, numbers.Integral):
            raise ParameterError(f"n_r must be an integer, got {self.n_r!r}")
        if self.n_r < 1:
            raise ParameterError(f"n_r must be >= 1, got {self.n_r}")
        object.__setattr__(self, "n_r", int(self.n_r))
        for name in ("w_hz", "rho", "epsilon", "p_s", "p_max",
                     "alpha_sr", "alpha_rd", "alpha_re"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, numbers.Real):
                raise ParameterError(f"{name} must be a real number, got {value!r}")
            object.__setattr__(self, name, float(value))
        _positive("w_hz", self.w_hz)
        _positive("p_max", self.p_max)
        for name in ("alpha_sr", "alpha_rd", "alpha_re"):
            _positive(name, getattr(self, name))
        if not 0.0 <= self.rho <= 1.0:
            raise ParameterError(f"rho must lie in [0, 1], got {self.rho!r}")
        if not 0.0 < self.epsilon < 1.0:
            raise ParameterError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")
        if not (math.isfinite(self.p_s) and self.p_s >= 0):
            raise ParameterError(f"p_s must be finite and >= 0, got {self.p_s!r}")

    def replace(self, **changes) -> "SystemParams":
        """Return a validated copy with some fields changed."""
        return dataclasses.replace(self, **changes)

    @property
    def source_limited_power(self) -> float:
        """Relay power at which both hops have equal hardened capacity."""
        return self.p_s * self.alpha_sr / (self.rho * self.alpha_rd)


@dataclass(frozen=True)
class DerivedConstants:
    """Shorthand ``A = rho*alpha_rd*N_R``, ``B = P_S*alpha_sr*N_R`` and ``r_l``."""

    a: float
    b: float
    r_l: float


def derive(params: SystemParams) -> DerivedConstants:
    """Compute A, B and the relative distance-dependent path loss r_l.

    Raises
    ------
    DegenerateCSIError
        If ``rho == 0``; r_l is undefined without any CSI correlation.
    """
    if params.rho == 0.0:
        raise DegenerateCSIError("degenerate CSI: rho = 0 leaves r_l undefined")
    a = params.rho * params.alpha_rd * params.n_r
    b = params.p_s * params.alpha_sr * params.n_r
    r_l = -params.alpha_re * math.log(params.epsilon) / a
    return DerivedConstants(a=a, b=b, r_l=r_l)
