"""Evaluation quantities: tracking error statistics, on-time, humidity guard."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class TrackingStats:
    mean_error: float
    variance: float
    std_dev: float
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


def tracking_stats(y: Sequence[float] | Iterable[tuple[float, float]],
                   y_ref: Sequence[float] | None = None) -> TrackingStats:
    """Mean and population variance of ``y - y_ref``.

    Accepts either two sequences or a single sequence of ``(y, y_ref)`` pairs.
    """
    if y_ref is None:
        pairs = np.asarray(list(y), dtype=float)
        if pairs.size == 0:
            raise ValueError("tracking_stats needs at least one sample")
        err = pairs[:, 0] - pairs[:, 1]
    else:
        err = np.asarray(y, dtype=float) - np.asarray(y_ref, dtype=float)
    if err.size == 0:
        raise ValueError("tracking_stats needs at least one sample")
    mean = float(err.mean())
    var = float(np.mean((err - mean) ** 2))
    return TrackingStats(mean, var, math.sqrt(var), int(err.size))


def actuator_on_time(waveform: Sequence[bool] | np.ndarray, resolution: float) -> float:
    """Minutes spent ON."""
    return float(np.count_nonzero(np.asarray(waveform))) * resolution / 60.0


SEVERE, SEEDLING, SATURATION = "severe", "seedling", "saturation"


@dataclass(frozen=True)
class Violation:
    index: int
    value: float
    level: str


def hygrometry_guard(hi_series: Sequence[float], severe_below: float = 20.0,
                     seedling_below: float = 40.0, saturation_above: float = 95.0) -> list[Violation]:
    """One flag per offending sample, at its most severe level."""
    out = []
    for i, hi in enumerate(hi_series):
        if hi < severe_below:
            out.append(Violation(i, float(hi), SEVERE))
        elif hi < seedling_below:
            out.append(Violation(i, float(hi), SEEDLING))
        elif hi > saturation_above:
            out.append(Violation(i, float(hi), SATURATION))
    return out


def violation_counts(violations: Iterable[Violation]) -> dict[str, int]:
    counts = {SEVERE: 0, SEEDLING: 0, SATURATION: 0}
    for v in violations:
        counts[v.level] += 1
    return counts
