"""Sliding-window estimators of the ultra-local term F.

Two estimators share one window type:

* ``algebraic_estimate`` integrates ``y`` and ``u`` against polynomial
  kernels, which cancels the unknown initial condition and acts as a
  low-pass differentiator. It is exact whenever ``y`` is affine and ``u``
  constant over the window.
* ``closed_loop_estimate`` averages ``y*' - alpha*u - K_P*e`` over the
  window, i.e. it assumes the iP loop already enforces ``e' = -K_P e``.

Both integrate with composite Simpson on the uniform sample grid and use
a window-local time variable, so they are invariant to shifting all
timestamps by a constant.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigurationError, InsufficientDataError, NonMonotonicSampleError


class WindowEntry(NamedTuple):
    t: float
    y: float
    u: float
    e: float = 0.0
    y_star_dot: float = 0.0


class SlidingWindow:
    """Fixed-capacity chronological buffer with spacing ``ts``.

    A window of ``capacity`` samples spans ``(capacity - 1) * ts``; the
    Simpson rule needs an even number of intervals, so ``capacity`` must
    be odd.
    """

    def __init__(self, capacity: int, ts: float):
        if capacity < 3 or capacity % 2 == 0:
            raise ConfigurationError(f"capacity must be odd and >= 3 for Simpson quadrature, got {capacity}")
        if not ts > 0:
            raise ConfigurationError(f"sampling period must be positive, got {ts}")
        self.capacity = capacity
        self.ts = ts
        self._entries: deque[WindowEntry] = deque(maxlen=capacity)

    @classmethod
    def for_span(cls, tau: float, ts: float) -> "SlidingWindow":
        n = round(tau / ts)
        if n < 1 or not math.isclose(n * ts, tau, rel_tol=1e-9):
            raise ConfigurationError(f"window length {tau} is not a multiple of the sampling period {ts}")
        return cls(n + 1, ts)

    @property
    def span(self) -> float:
        return (self.capacity - 1) * self.ts

    @property
    def is_full(self) -> bool:
        return len(self._entries) == self.capacity

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __getitem__(self, i: int) -> WindowEntry:
        return self._entries[i]

    def push(self, entry: WindowEntry) -> "SlidingWindow":
        if self._entries:
            expected = self._entries[-1].t + self.ts
            if not math.isclose(entry.t, expected, rel_tol=1e-9, abs_tol=1e-9 * self.ts):
                raise NonMonotonicSampleError(
                    f"non-monotonic sample: got t={entry.t}, expected t={expected}")
        self._entries.append(WindowEntry(*entry))
        return self

    def clear(self) -> None:
        self._entries.clear()

    def columns(self) -> dict[str, np.ndarray]:
        if not self._entries:
            return {k: np.empty(0) for k in WindowEntry._fields}
        arr = np.asarray(self._entries, dtype=float)
        return {k: arr[:, i] for i, k in enumerate(WindowEntry._fields)}


def push_sample(window: SlidingWindow, entry: WindowEntry) -> SlidingWindow:
    return window.push(entry)


@dataclass(frozen=True)
class EstimatorConfig:
    tau: float
    alpha: float = 1.0
    k_p: float = 2.0

    def __post_init__(self):
        if not self.tau > 0:
            raise ConfigurationError(f"tau must be positive, got {self.tau}")
        if self.alpha == 0 or not math.isfinite(self.alpha):
            raise ConfigurationError(f"alpha must be finite and non-zero, got {self.alpha}")


def simpson_weights(n_points: int, h: float) -> np.ndarray:
    """Composite Simpson weights for ``n_points`` (odd) equally spaced nodes."""
    if n_points < 3 or n_points % 2 == 0:
        raise ValueError("composite Simpson needs an odd number of points >= 3")
    w = np.ones(n_points)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def _checked(window: SlidingWindow, cfg: EstimatorConfig) -> dict[str, np.ndarray]:
    if not window.is_full:
        raise InsufficientDataError(
            f"insufficient data: window holds {len(window)} of {window.capacity} samples")
    if not math.isclose(cfg.tau, window.span, rel_tol=1e-9):
        raise ConfigurationError(f"tau={cfg.tau} does not match the window span {window.span}")
    return window.columns()


def algebraic_estimate(window: SlidingWindow, cfg: EstimatorConfig) -> float:
    """``-(6/tau^3) * int_0^tau [(tau - 2s) y + alpha s (tau - s) u] ds`` over the window."""
    cols = _checked(window, cfg)
    tau = cfg.tau
    sigma = cols["t"] - cols["t"][0]
    integrand = (tau - 2.0 * sigma) * cols["y"] + cfg.alpha * sigma * (tau - sigma) * cols["u"]
    w = simpson_weights(window.capacity, window.ts)
    return float(-6.0 / tau**3 * (w @ integrand))


def closed_loop_estimate(window: SlidingWindow, cfg: EstimatorConfig) -> float:
    """Window average of ``y*' - alpha*u - K_P*e``.

    When this estimate is fed back into the iP law whose ``u`` fills the
    window, each integrand value equals the estimate that produced that
    ``u``. The result is then a moving average of its own history and
    carries no information about the plant; it recovers F only while some
    other means keeps the loop on ``e' = -K_P e``.
    """
    cols = _checked(window, cfg)
    integrand = cols["y_star_dot"] - cfg.alpha * cols["u"] - cfg.k_p * cols["e"]
    w = simpson_weights(window.capacity, window.ts)
    return float((w @ integrand) / cfg.tau)
