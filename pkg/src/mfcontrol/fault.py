"""Actuator loss-of-efficiency faults.

A fault scales the command actually delivered to the plant,
``u_r = u * (1 - beta)``. Nothing here is visible to the controller; the
shifted dynamics ``F - alpha*beta*u`` are absorbed by the F estimate.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import ConfigurationError


@dataclass(frozen=True)
class FaultProfile:
    """Piecewise-constant ``beta(t)``; 0 before the first segment."""

    segments: tuple[tuple[float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        starts = [s for s, _ in self.segments]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ConfigurationError("fault segment start times must be strictly increasing")
        for start, beta in self.segments:
            if not 0.0 <= beta < 1.0:
                raise ConfigurationError(f"beta must satisfy 0 <= beta < 1, got {beta} at t={start}")

    @classmethod
    def from_config(cls, items: Iterable[Mapping[str, float]] | None) -> "FaultProfile":
        if not items:
            return cls()
        return cls(tuple((float(d["start_s"]), float(d["beta"])) for d in items))

    def beta_at(self, t: float) -> float:
        i = bisect.bisect_right([s for s, _ in self.segments], t)
        return self.segments[i - 1][1] if i else 0.0

    @property
    def first_fault_time(self) -> float | None:
        for start, beta in self.segments:
            if beta > 0:
                return start
        return None


def apply_fault(u: float, profile: FaultProfile, t: float) -> float:
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return u * (1.0 - profile.beta_at(t))


def effective_f(f: float, alpha: float, beta: float, u: float) -> float:
    """Ultra-local term seen by the controller under a fault: ``F - alpha*beta*u``."""
    return f - alpha * beta * u
