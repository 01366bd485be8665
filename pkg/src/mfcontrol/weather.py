"""Weather traces: CSV loading, interpolation and a synthetic night generator."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import WeatherLoadError
from .greenhouse import WeatherPoint

COLUMNS = ("t_s", "te_c", "he_pct", "rg_wm2", "vv_kmh")


@dataclass(frozen=True)
class WeatherTrace:
    t: np.ndarray
    te: np.ndarray
    he: np.ndarray
    rg: np.ndarray
    vv: np.ndarray

    def __len__(self) -> int:
        return len(self.t)

    def at(self, t: float) -> WeatherPoint:
        """Linear interpolation; clamps to the end rows outside the trace."""
        return WeatherPoint(
            te=float(np.interp(t, self.t, self.te)),
            he=float(np.interp(t, self.t, self.he)),
            rg=float(np.interp(t, self.t, self.rg)),
            vv=float(np.interp(t, self.t, self.vv)),
            t=float(t),
        )

    def sample(self, times: np.ndarray) -> np.ndarray:
        """Interpolated ``(len(times), 4)`` array of te, he, rg, vv."""
        return np.column_stack([np.interp(times, self.t, col) for col in (self.te, self.he, self.rg, self.vv)])

    def covers(self, duration: float) -> bool:
        return self.t[0] <= 0.0 and self.t[-1] >= duration


def _check(values: dict[str, float], row: int):
    if not 0.0 <= values["he_pct"] <= 100.0:
        raise WeatherLoadError(f"row {row}, column he_pct: humidity {values['he_pct']} outside [0, 100]")
    if values["rg_wm2"] < 0:
        raise WeatherLoadError(f"row {row}, column rg_wm2: negative solar radiation {values['rg_wm2']}")
    if values["vv_kmh"] < 0:
        raise WeatherLoadError(f"row {row}, column vv_kmh: negative wind speed {values['vv_kmh']}")


def load_weather_csv(path: str | Path) -> WeatherTrace:
    """Read ``t_s,te_c,he_pct,rg_wm2,vv_kmh`` rows. Row numbers in errors count the header as row 1."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in COLUMNS if c not in header]
        if missing:
            raise WeatherLoadError(f"row 1: missing column(s) {', '.join(missing)}")
        data = {c: [] for c in COLUMNS}
        for row_no, row in enumerate(reader, start=2):
            values = {}
            for c in COLUMNS:
                raw = row.get(c)
                try:
                    values[c] = float(raw)
                except (TypeError, ValueError):
                    raise WeatherLoadError(f"row {row_no}, column {c}: cannot parse {raw!r}") from None
                if not math.isfinite(values[c]):
                    raise WeatherLoadError(f"row {row_no}, column {c}: non-finite value {raw!r}")
            if data["t_s"] and values["t_s"] <= data["t_s"][-1]:
                raise WeatherLoadError(f"row {row_no}, column t_s: non-monotonic time {values['t_s']}")
            _check(values, row_no)
            for c in COLUMNS:
                data[c].append(values[c])
    if not data["t_s"]:
        raise WeatherLoadError(f"{path}: no data rows")
    return WeatherTrace(*(np.asarray(data[c]) for c in COLUMNS))


def write_weather_csv(trace: WeatherTrace, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(COLUMNS)
        for row in zip(trace.t, trace.te, trace.he, trace.rg, trace.vv):
            w.writerow([repr(float(v)) for v in row])


def synth_night_weather(duration: float, te_start: float = 7.0, te_min: float = 0.5, seed: int = 0,
                        he_start: float = 55.0, he_end: float = 75.0, wind_mean: float = 3.0,
                        noise: bool = True, step: float = 60.0) -> WeatherTrace:
    """Night trace at one row per ``step`` seconds.

    Outside temperature relaxes from ``te_start`` toward ``te_min`` with a
    time constant of a third of the duration, humidity drifts linearly from
    ``he_start`` to ``he_end``, there is no sun, and the wind is low.
    Small seeded AR(1) noise is added unless ``noise`` is False.
    """
    if not duration > 0:
        raise ValueError("duration must be positive")
    n = int(math.ceil(duration / step)) + 1
    t = np.arange(n) * step
    te = te_min + (te_start - te_min) * np.exp(-3.0 * t / duration)
    he = he_start + (he_end - he_start) * np.minimum(t / duration, 1.0)
    vv = np.full(n, wind_mean)
    if noise:
        rng = np.random.default_rng(seed)
        shocks = rng.standard_normal((n, 3))
        ar = np.zeros((n, 3))
        for i in range(1, n):
            ar[i] = 0.95 * ar[i - 1] + np.sqrt(1 - 0.95**2) * shocks[i]
        te = te + 0.1 * ar[:, 0]
        he = he + 0.5 * ar[:, 1]
        vv = vv + 1.0 * ar[:, 2]
    he = np.clip(he, 0.0, 100.0)
    vv = np.maximum(vv, 0.0)
    return WeatherTrace(t.astype(float), te, he, np.zeros(n), vv)
