"""Ultra-local model and the intelligent P / PI control laws.

All functions here are pure. The time unit is whatever unit the caller
uses for derivatives; the greenhouse harness works in minutes so that the
default gains (``alpha=1``, ``k_p=2``) act per minute.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol, Sequence

from .errors import ConfigurationError


@dataclass(frozen=True)
class UltraLocalModel:
    """First-order ultra-local model ``dy/dt = F + alpha * u``."""

    alpha: float = 1.0
    order: int = 1

    def __post_init__(self):
        if not math.isfinite(self.alpha) or self.alpha == 0.0:
            raise ConfigurationError(f"alpha must be finite and non-zero, got {self.alpha}")
        if self.order != 1:
            raise ConfigurationError(f"only first-order models are supported, got order={self.order}")


@dataclass(frozen=True)
class GainSet:
    k_p: float = 2.0
    k_i: float = 0.0

    def __post_init__(self):
        if not self.k_p > 0.0:
            raise ConfigurationError(f"k_p must be > 0 for stable error dynamics, got {self.k_p}")
        if not self.k_i >= 0.0:
            raise ConfigurationError(f"k_i must be >= 0, got {self.k_i}")


class ReferenceSignal(Protocol):
    def value_at(self, t: float) -> float: ...

    def derivative_at(self, t: float) -> float: ...


@dataclass(frozen=True)
class ConstantReference:
    value: float

    def value_at(self, t: float) -> float:
        return self.value

    def derivative_at(self, t: float) -> float:
        return 0.0


@dataclass(frozen=True)
class StepReference:
    """Piecewise-constant reference. ``steps`` is a list of ``(start, value)``.

    The derivative is 0 everywhere, including at the step instants.
    """

    steps: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.steps:
            raise ConfigurationError("step reference needs at least one step")
        starts = [s for s, _ in self.steps]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ConfigurationError("step start times must be strictly increasing")

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "StepReference":
        return cls(tuple((float(s), float(v)) for s, v in pairs))

    def value_at(self, t: float) -> float:
        value = self.steps[0][1]
        for start, v in self.steps:
            if t >= start:
                value = v
            else:
                break
        return value

    def derivative_at(self, t: float) -> float:
        return 0.0


def tracking_error(y: float, y_star: float) -> float:
    return y - y_star


def ip_control(f_est: float, y: float, y_star: float, y_star_dot: float,
               gains: GainSet, model: UltraLocalModel) -> float:
    """Intelligent proportional law ``u = -(F - y*' + K_P e) / alpha``.

    The result is not saturated; clamping belongs to the actuator stage.
    """
    e = y - y_star
    return -(f_est - y_star_dot + gains.k_p * e) / model.alpha


def ipi_control(f_est: float, y: float, e_integral: float, y_star: float, y_star_dot: float,
                gains: GainSet, model: UltraLocalModel) -> float:
    e = y - y_star
    return -(f_est - y_star_dot + gains.k_p * e + gains.k_i * e_integral) / model.alpha


class ErrorIntegrator:
    """Left-rectangle accumulator of the tracking error for the iPI law.

    The running sum is clamped to ``+-10 * actuator_span / k_i`` so that a
    saturated actuator cannot wind the integral up without bound.
    """

    def __init__(self, gains: GainSet, dt: float, actuator_span: float = 1.0):
        if dt <= 0:
            raise ConfigurationError("dt must be positive")
        self.dt = dt
        self.limit = 10.0 * actuator_span / gains.k_i if gains.k_i > 0 else math.inf
        self.value = 0.0

    def update(self, e: float) -> float:
        """Return the integral to use now, then accumulate ``e`` for the next period."""
        current = self.value
        self.value = min(max(self.value + e * self.dt, -self.limit), self.limit)
        return current

    def reset(self) -> None:
        self.value = 0.0


def predict_error(e0: float, k_p: float, t: float) -> float:
    """Closed-form solution of ``e' + k_p e = 0``."""
    if t < 0:
        raise ValueError(f"elapsed time must be >= 0, got {t}")
    if k_p <= 0:
        raise ValueError(f"k_p must be > 0, got {k_p}")
    return e0 * math.exp(-k_p * t)
