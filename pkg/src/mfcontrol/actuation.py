"""Continuous-to-Boolean actuation (PWM) and the Boolean baseline laws."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class DutyCycle:
    """ON fraction of a PWM period, clamped to [0, 1] on construction."""

    value: float

    def __post_init__(self):
        if math.isnan(self.value):
            raise ValueError("duty cycle cannot be NaN")
        object.__setattr__(self, "value", min(max(float(self.value), 0.0), 1.0))

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class HysteresisConfig:
    reference: float = 18.0
    tolerance: float = 0.5

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ConfigurationError(f"tolerance must be positive, got {self.tolerance}")


@dataclass(frozen=True)
class FogSchedule:
    on_duration: float = 180.0
    off_duration: float = 1620.0
    dehumid_ref: float = 60.0

    def __post_init__(self):
        if self.on_duration < 0 or self.off_duration < 0 or self.on_duration + self.off_duration <= 0:
            raise ConfigurationError("fog schedule durations must be non-negative with a positive period")

    @property
    def period(self) -> float:
        return self.on_duration + self.off_duration


def to_duty(u: float) -> DutyCycle:
    """Saturate a continuous command; negative demand on a one-sided actuator gives 0."""
    if math.isnan(u):
        raise ValueError("control command is NaN")
    return DutyCycle(u)


def pwm_slots(duty: DutyCycle | float, n_slots: int) -> int:
    d = float(duty)
    return int(math.floor(d * n_slots + 0.5))


def pwm_waveform(duty: DutyCycle | float, period: float, resolution: float) -> np.ndarray:
    """Boolean waveform: the first ``round(duty * n)`` slots ON, the rest OFF."""
    if resolution <= 0 or resolution > period:
        raise ConfigurationError(f"resolution {resolution} must be in (0, period={period}]")
    n = round(period / resolution)
    if not math.isclose(n * resolution, period, rel_tol=1e-9):
        raise ConfigurationError(f"resolution {resolution} does not divide period {period}")
    wave = np.zeros(n, dtype=bool)
    wave[:pwm_slots(duty, n)] = True
    return wave


def boolean_heat(ti: float, cfg: HysteresisConfig, prev_on: bool) -> bool:
    """Threshold heating with a hold band of +-tolerance around the reference."""
    if ti < cfg.reference - cfg.tolerance:
        return True
    if ti > cfg.reference + cfg.tolerance:
        return False
    return prev_on


def boolean_fog(t: float, hi: float, sched: FogSchedule) -> bool:
    """Periodic fog pulse, inhibited at or above the dehumidification reference."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return (t % sched.period) < sched.on_duration and hi < sched.dehumid_ref
