"""Synthetic greenhouse plant used as the closed-loop test bed.

The model is a two-state bilinear ODE (internal temperature ``ti`` in degC
and relative humidity ``hi`` in %), with rates per second:

    ti' = k_loss (te - ti) + k_sun rg (1 - om) + k_heat ch - k_fog_t br
          + k_vent ov (te - ti) (1 + k_wind vv)
    hi' = k_hx (he - hi) - k_dry ch + k_fog_h br - k_vent_h ov (hi - he)

Heating warms and dries, fog cools and humidifies, opening cools and
dries. Controllers never see these coefficients.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from . import _kernel_py
from .errors import ConfigurationError, IntegratorFault


@dataclass(frozen=True)
class PlantState:
    ti: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "hi", min(max(self.hi, 0.0), 100.0))


@dataclass(frozen=True)
class WeatherPoint:
    te: float
    he: float
    rg: float = 0.0
    vv: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        if self.rg < 0:
            raise ConfigurationError(f"solar radiation must be >= 0, got {self.rg}")
        if not 0.0 <= self.he <= 100.0:
            raise ConfigurationError(f"external humidity must be within [0, 100], got {self.he}")
        if self.vv < 0:
            raise ConfigurationError(f"wind speed must be >= 0, got {self.vv}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.te, self.he, self.rg, self.vv)


@dataclass(frozen=True)
class ActuatorInputs:
    ch: float = 0.0
    br: float = 0.0
    ov: float = 0.0
    om: float = 0.0

    def __post_init__(self):
        for name in ("ch", "br", "om"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigurationError(f"{name} must be within [0, 1], got {v}")
        if not 0.0 <= self.ov <= 0.5:
            raise ConfigurationError(f"opening is limited to 50 %, got ov={self.ov}")


@dataclass(frozen=True)
class GreenhouseParams:
    # thermal, per second
    k_loss: float = 5e-5
    k_sun: float = 1e-5
    k_heat: float = 0.004
    k_fog_t: float = 1e-4
    k_vent: float = 5e-4
    k_wind: float = 0.02
    # hygrometric, per second
    k_hx: float = 1.5e-4
    k_dry: float = 0.0135
    k_fog_h: float = 0.012
    k_vent_h: float = 1e-3

    def __post_init__(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if not (math.isfinite(v) and v >= 0):
                raise ConfigurationError(f"plant coefficient {f.name} must be finite and >= 0, got {v}")
        if self.k_heat <= 0:
            raise ConfigurationError("k_heat must be > 0")

    def as_tuple(self) -> tuple[float, ...]:
        return dataclasses.astuple(self)

    def replace(self, **changes) -> "GreenhouseParams":
        return dataclasses.replace(self, **changes)

    def perturbed(self, rng: np.random.Generator, spread: float = 0.3) -> "GreenhouseParams":
        """Scale every coefficient by an independent factor in ``[1 - spread, 1 + spread]``."""
        factors = rng.uniform(1.0 - spread, 1.0 + spread, size=len(dataclasses.fields(self)))
        values = [v * f for v, f in zip(self.as_tuple(), factors)]
        return GreenhouseParams(*values)


def plant_derivatives(state: PlantState, inputs: ActuatorInputs, weather: WeatherPoint,
                      params: GreenhouseParams) -> tuple[float, float]:
    return _kernel_py.plant_rhs(state.ti, state.hi, inputs.ch, inputs.br, inputs.ov, inputs.om,
                                weather.te, weather.he, weather.rg, weather.vv, params.as_tuple())


def step_plant(state: PlantState, inputs: ActuatorInputs, weather: WeatherPoint,
               params: GreenhouseParams, dt: float, max_step: float = 1.0) -> PlantState:
    """Advance the plant by ``dt`` seconds with RK4, sub-stepping at ``max_step``.

    Inputs and weather are held constant across ``dt``.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    n = max(1, math.ceil(dt / max_step - 1e-12))
    h = dt / n
    w = weather.as_tuple()
    p = params.as_tuple()
    ti, hi = state.ti, state.hi
    for k in range(n):
        ti, hi = _kernel_py.rk4_step(ti, hi, inputs.ch, inputs.br, inputs.ov, inputs.om,
                                     w, w, k * h, h, dt, p)
    if not (math.isfinite(ti) and math.isfinite(hi)):
        raise IntegratorFault(f"non-finite plant state ti={ti}, hi={hi}")
    return PlantState(ti, hi)


@dataclass(frozen=True)
class SensorModel:
    """Gaussian noise plus quantization, reproducible from ``(seed, step)``.

    Defaults put the PT100 class-A accuracy of +-0.3 degC at 3 sigma.
    """

    sigma_t: float = 0.1
    sigma_h: float = 0.5
    quantum: float = 0.1
    seed: int = 0

    def read(self, state: PlantState, step: int) -> tuple[float, float]:
        return read_sensors(state, (self.seed, step), self.sigma_t, self.sigma_h, self.quantum)


def _quantize(x: float, q: float) -> float:
    if q <= 0:
        return x
    return round(round(x / q) * q, 10)


def read_sensors(state: PlantState, rng_seed, sigma_t: float = 0.1, sigma_h: float = 0.5,
                 quantum: float = 0.1) -> tuple[float, float]:
    if sigma_t == 0 and sigma_h == 0 and quantum <= 0:
        return state.ti, state.hi
    rng = np.random.default_rng(rng_seed)
    nt, nh = rng.standard_normal(2)
    ti = _quantize(state.ti + sigma_t * nt, quantum)
    hi = _quantize(min(max(state.hi + sigma_h * nh, 0.0), 100.0), quantum)
    return ti, hi
