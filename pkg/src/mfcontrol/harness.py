"""Scenario runner: the fixed-period greenhouse control loop and its outputs.

Each control period (60 s by default) the loop reads the sensors, updates
the estimation windows, computes one iP command per channel (temperature
drives heating, hygrometry drives fog), converts commands to duty cycles,
applies any heating fault, expands the duties into 1 s PWM slots and
integrates the plant across the period.

The controller side works in "model time units" (minutes by default) so
the default gains ``alpha=1, k_p=2`` and the 6-minute window are per
minute. Output timestamps are seconds.
"""
from __future__ import annotations

import copy
import csv
import dataclasses
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .actuation import FogSchedule, HysteresisConfig, boolean_fog, boolean_heat, pwm_waveform, to_duty
from .control import (ConstantReference, ErrorIntegrator, GainSet, StepReference, UltraLocalModel,
                      ip_control, ipi_control)
from .errors import ConfigurationError, IntegratorFault
from .estimation import (EstimatorConfig, SlidingWindow, WindowEntry, algebraic_estimate,
                         closed_loop_estimate)
from .fault import FaultProfile
from .greenhouse import GreenhouseParams, PlantState, SensorModel
from .kernel import simulate_period
from .metrics import actuator_on_time, hygrometry_guard, tracking_stats, violation_counts
from .references import DEFAULT_SCHEDULE, reference_at
from .weather import WeatherTrace, load_weather_csv, synth_night_weather

CSV_COLUMNS = ("t_s", "ti_c", "hi_pct", "ti_ref_c", "hi_ref_pct", "te_c", "he_pct", "rg_wm2", "vv_kmh",
               "u_heat", "duty_heat", "u_fog", "duty_fog", "f_est_temp", "f_est_hygro", "beta")

ESTIMATORS = {"closed_loop": closed_loop_estimate, "algebraic": algebraic_estimate}

DEFAULTS: dict[str, Any] = {
    "duration_s": 43200,
    "control_period_s": 60,
    "pwm_resolution_s": 1,
    "plant_dt_s": 1.0,
    "model_time_unit_s": 60,
    "controller": "ip",
    "estimator": "algebraic",
    "alpha": 1.0,
    "k_p": 2.0,
    "k_i": 0.0,
    "window_min": 6,
    "temperature_reference": 18.0,
    "hygrometry_reference": 60.0,
    "tolerance_c": 0.5,
    "fog_schedule": {"on_s": 180, "off_s": 1620, "dehumid_ref_pct": 60.0},
    "weather": {"synthetic": {}},
    "fault": [],
    "plant": {},
    "initial_state": {"ti": 18.0, "hi": 60.0},
    "openings": {"ov": 0.0, "om": 0.0},
    "sensor": {"sigma_t": 0.1, "sigma_h": 0.5, "quantum": 0.1},
    "seed": 0,
    "metrics_start_s": 0,
}


def _schema() -> dict:
    return json.loads(resources.files("mfcontrol").joinpath("scenario.schema.json").read_text())


def _build_reference(spec: Any, what: str):
    if isinstance(spec, (int, float)):
        return ConstantReference(float(spec))
    if isinstance(spec, dict) and "steps" in spec:
        return StepReference.from_pairs(spec["steps"])
    if isinstance(spec, dict) and "species" in spec:
        value = reference_at(DEFAULT_SCHEDULE, spec["species"], float(spec.get("weeks", 0.0)),
                             bool(spec.get("is_day", False)))
        return ConstantReference(value)
    raise ConfigurationError(f"unrecognised {what} reference: {spec!r}")


@dataclass
class Scenario:
    """A fully resolved experiment description.

    ``config`` keeps the merged JSON (defaults filled in) for echoing into
    the metrics file; the other attributes are the typed pieces the loop uses.
    """

    name: str
    config: dict
    duration: float
    period: float
    resolution: float
    plant_dt: float
    time_unit: float
    controller: str
    estimator: str
    model: UltraLocalModel
    gains: GainSet
    window_min: float
    temp_ref: Any
    hygro_ref: Any
    hysteresis: HysteresisConfig
    fog: FogSchedule
    weather: WeatherTrace
    fault: FaultProfile
    params: GreenhouseParams
    initial: PlantState
    ov: float
    om: float
    sensor: SensorModel
    metrics_start: float
    base_dir: Path = field(default_factory=Path.cwd)

    @classmethod
    def from_dict(cls, raw: dict, base_dir: str | Path | None = None) -> "Scenario":
        cfg = copy.deepcopy(DEFAULTS)
        for key, value in raw.items():
            if isinstance(value, dict) and isinstance(cfg.get(key), dict) and key not in ("weather",):
                cfg[key] = {**cfg[key], **value}
            else:
                cfg[key] = value
        cfg.setdefault("name", "scenario")
        try:
            jsonschema.validate(cfg, _schema())
        except jsonschema.ValidationError as exc:
            loc = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise ConfigurationError(f"scenario field {loc}: {exc.message}") from None

        base = Path(base_dir) if base_dir is not None else Path.cwd()
        period = float(cfg["control_period_s"])
        duration = float(cfg["duration_s"])
        if not math.isclose(duration / period, round(duration / period)):
            raise ConfigurationError(f"duration {duration} s is not a multiple of the control period {period} s")
        resolution = float(cfg["pwm_resolution_s"])
        if not math.isclose(period / resolution, round(period / resolution)):
            raise ConfigurationError("pwm_resolution_s must divide control_period_s")

        weather_cfg = cfg["weather"]
        if "file" in weather_cfg:
            path = Path(weather_cfg["file"])
            if not path.is_absolute():
                path = base / path
            if not path.exists():
                raise ConfigurationError(f"weather file not found: {path}")
            weather = load_weather_csv(path)
        else:
            weather = synth_night_weather(duration, **weather_cfg.get("synthetic", {}))
        if not weather.covers(duration):
            raise ConfigurationError("weather trace does not cover the scenario duration")

        time_unit = float(cfg["model_time_unit_s"])
        window_min = float(cfg["window_min"])
        # validate window geometry early
        SlidingWindow.for_span(window_min * 60.0 / time_unit, period / time_unit)
        temp_ref = _build_reference(cfg["temperature_reference"], "temperature")
        sensor_cfg = cfg["sensor"]
        fog_cfg = cfg["fog_schedule"]
        return cls(
            name=cfg["name"],
            config=cfg,
            duration=duration,
            period=period,
            resolution=resolution,
            plant_dt=float(cfg["plant_dt_s"]),
            time_unit=time_unit,
            controller=cfg["controller"],
            estimator=cfg["estimator"],
            model=UltraLocalModel(float(cfg["alpha"])),
            gains=GainSet(float(cfg["k_p"]), float(cfg["k_i"])),
            window_min=window_min,
            temp_ref=temp_ref,
            hygro_ref=_build_reference(cfg["hygrometry_reference"], "hygrometry"),
            hysteresis=HysteresisConfig(temp_ref.value_at(0.0), float(cfg["tolerance_c"])),
            fog=FogSchedule(float(fog_cfg["on_s"]), float(fog_cfg["off_s"]), float(fog_cfg["dehumid_ref_pct"])),
            weather=weather,
            fault=FaultProfile.from_config(cfg["fault"]),
            params=GreenhouseParams(**cfg["plant"]),
            initial=PlantState(float(cfg["initial_state"]["ti"]), float(cfg["initial_state"]["hi"])),
            ov=float(cfg["openings"]["ov"]),
            om=float(cfg["openings"]["om"]),
            sensor=SensorModel(float(sensor_cfg["sigma_t"]), float(sensor_cfg["sigma_h"]),
                               float(sensor_cfg["quantum"]), int(cfg["seed"])),
            metrics_start=float(cfg["metrics_start_s"]),
            base_dir=base,
        )

    @classmethod
    def load(cls, path: str | Path) -> "Scenario":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigurationError(f"scenario file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(raw, base_dir=path.parent)

    def with_changes(self, **overrides) -> "Scenario":
        """Re-resolve the scenario with some top-level JSON fields replaced."""
        raw = copy.deepcopy(self.config)
        raw.update(overrides)
        return Scenario.from_dict(raw, base_dir=self.base_dir)


def builtin_scenario(name: str) -> Scenario:
    """Load one of the scenarios shipped in ``mfcontrol/scenarios``."""
    res = resources.files("mfcontrol").joinpath("scenarios", f"{name}.json")
    return Scenario.from_dict(json.loads(res.read_text()))


@dataclass
class RunResult:
    scenario: Scenario
    columns: dict[str, np.ndarray]
    metrics: dict
    heat_wave: np.ndarray
    fog_wave: np.ndarray
    truth: dict[str, np.ndarray]

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        cols = [self.columns[c] for c in CSV_COLUMNS]
        for row in zip(*cols):
            w.writerow(["" if math.isnan(v) else repr(float(v)) for v in row])
        return buf.getvalue()

    def pwm_csv_text(self) -> str:
        buf = io.StringIO()
        buf.write("t_s,heat,fog\n")
        res = self.scenario.resolution
        for i, (h, f) in enumerate(zip(self.heat_wave, self.fog_wave)):
            buf.write(f"{i * res:g},{int(h)},{int(f)}\n")
        return buf.getvalue()

    def csv_sha256(self) -> str:
        return hashlib.sha256(self.csv_text().encode()).hexdigest()

    def write(self, out_dir: str | Path) -> dict[str, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "timeseries": out / f"{self.scenario.name}.csv",
            "pwm": out / f"{self.scenario.name}_pwm.csv",
            "metrics": out / f"{self.scenario.name}_metrics.json",
        }
        paths["timeseries"].write_text(self.csv_text(), encoding="utf-8")
        paths["pwm"].write_text(self.pwm_csv_text(), encoding="utf-8")
        paths["metrics"].write_text(json.dumps(self.metrics, indent=2, sort_keys=True), encoding="utf-8")
        return paths


class _Channel:
    """Controller state for one iP/iPI-controlled output."""

    def __init__(self, sc: Scenario):
        ts = sc.period / sc.time_unit
        tau = sc.window_min * 60.0 / sc.time_unit
        self.window = SlidingWindow.for_span(tau, ts)
        self.cfg = EstimatorConfig(tau=tau, alpha=sc.model.alpha, k_p=sc.gains.k_p)
        self.estimate = ESTIMATORS[sc.estimator]
        self.integrator = ErrorIntegrator(sc.gains, ts) if sc.controller == "ipi" else None
        self.sc = sc

    def command(self, t_model: float, y: float, y_star: float, y_star_dot: float) -> tuple[float, float]:
        # warm-up: pure proportional behaviour until the window is full
        f_est = self.estimate(self.window, self.cfg) if self.window.is_full else 0.0
        if self.integrator is None:
            u = ip_control(f_est, y, y_star, y_star_dot, self.sc.gains, self.sc.model)
        else:
            e_int = self.integrator.update(y - y_star)
            u = ipi_control(f_est, y, e_int, y_star, y_star_dot, self.sc.gains, self.sc.model)
        self.window.push(WindowEntry(t_model, y, u, y - y_star, y_star_dot))
        return u, f_est


def run_scenario(sc: Scenario) -> RunResult:
    n = int(round(sc.duration / sc.period))
    n_slots = int(round(sc.period / sc.resolution))
    nsub = max(1, math.ceil(sc.resolution / sc.plant_dt - 1e-12))
    p = sc.params.as_tuple()
    times = np.arange(n + 1) * sc.period
    wx = sc.weather.sample(times)

    cols = {c: np.full(n, np.nan) for c in CSV_COLUMNS}
    heat_wave = np.zeros(n * n_slots, dtype=bool)
    fog_wave = np.zeros(n * n_slots, dtype=bool)
    truth = {"ti": np.empty(n + 1), "hi": np.empty(n + 1), "u_applied_heat": np.empty(n)}

    temp_ch = hyg_ch = None
    if sc.controller in ("ip", "ipi"):
        temp_ch, hyg_ch = _Channel(sc), _Channel(sc)
    heat_prev = False
    slot_offsets = np.arange(n_slots) * sc.resolution

    ti, hi = sc.initial.ti, sc.initial.hi
    for k in range(n):
        t = times[k]
        truth["ti"][k], truth["hi"][k] = ti, hi
        ti_m, hi_m = sc.sensor.read(PlantState(ti, hi), k)
        ti_ref, hi_ref = sc.temp_ref.value_at(t), sc.hygro_ref.value_at(t)
        beta = sc.fault.beta_at(t)

        if temp_ch is not None:
            tm = t / sc.time_unit
            # reference derivatives are per second; convert to per model unit
            u_heat, f_t = temp_ch.command(tm, ti_m, ti_ref, sc.temp_ref.derivative_at(t) * sc.time_unit)
            u_fog, f_h = hyg_ch.command(tm, hi_m, hi_ref, sc.hygro_ref.derivative_at(t) * sc.time_unit)
            duty_heat, duty_fog = to_duty(u_heat).value, to_duty(u_fog).value
            heat = pwm_waveform(duty_heat * (1.0 - beta), sc.period, sc.resolution)
            fog = pwm_waveform(duty_fog, sc.period, sc.resolution)
        else:
            hyst = dataclasses.replace(sc.hysteresis, reference=ti_ref)
            heat_prev = boolean_heat(ti_m, hyst, heat_prev)
            u_heat = duty_heat = 1.0 if heat_prev else 0.0
            heat = pwm_waveform(duty_heat * (1.0 - beta), sc.period, sc.resolution)
            fog = np.fromiter((boolean_fog(t + s, hi_m, sc.fog) for s in slot_offsets), dtype=bool, count=n_slots)
            u_fog = duty_fog = float(fog.mean())
            f_t = f_h = math.nan

        heat_wave[k * n_slots:(k + 1) * n_slots] = heat
        fog_wave[k * n_slots:(k + 1) * n_slots] = fog
        truth["u_applied_heat"][k] = heat.mean()

        w0, w1 = wx[k], wx[k + 1]
        row = (t, ti_m, hi_m, ti_ref, hi_ref, w0[0], w0[1], w0[2], w0[3],
               u_heat, duty_heat, u_fog, duty_fog, f_t, f_h, beta)
        for c, v in zip(CSV_COLUMNS, row):
            cols[c][k] = v

        ti, hi = simulate_period(ti, hi, heat, fog, sc.ov, sc.om, tuple(w0), tuple(w1), p, sc.period, nsub)
        if not (math.isfinite(ti) and math.isfinite(hi)):
            raise IntegratorFault(f"non-finite plant state at t={t + sc.period:g} s (ti={ti}, hi={hi})")
    truth["ti"][n], truth["hi"][n] = ti, hi

    metrics = compute_metrics(sc, cols, heat_wave, fog_wave)
    return RunResult(sc, cols, metrics, heat_wave, fog_wave, truth)


def compute_metrics(sc: Scenario, cols: dict[str, np.ndarray], heat_wave: np.ndarray,
                    fog_wave: np.ndarray) -> dict:
    mask = cols["t_s"] >= sc.metrics_start
    if not mask.any():
        raise ConfigurationError("metrics_start_s leaves no samples to evaluate")
    temp = tracking_stats(cols["ti_c"][mask], cols["ti_ref_c"][mask])
    hyg = tracking_stats(cols["hi_pct"][mask], cols["hi_ref_pct"][mask])
    heat_min = actuator_on_time(heat_wave, sc.resolution)
    fog_min = actuator_on_time(fog_wave, sc.resolution)
    out = {
        "scenario": sc.name,
        "temperature": temp.to_dict(),
        "hygrometry": hyg.to_dict(),
        "on_time_min": {"heat": heat_min, "fog": fog_min},
        "duty_mean": {"heat": heat_min * 60.0 / sc.duration, "fog": fog_min * 60.0 / sc.duration},
        "violations": violation_counts(hygrometry_guard(cols["hi_pct"])),
        "config": sc.config,
    }
    t_fault = sc.fault.first_fault_time
    if t_fault is not None:
        post = cols["t_s"] >= t_fault
        if post.any():
            out["post_fault"] = {
                "start_s": t_fault,
                "temperature": tracking_stats(cols["ti_c"][post], cols["ti_ref_c"][post]).to_dict(),
            }
    return out


def _summary(m: dict) -> dict:
    return {
        "temperature_mean": m["temperature"]["mean_error"],
        "temperature_variance": m["temperature"]["variance"],
        "hygrometry_mean": m["hygrometry"]["mean_error"],
        "hygrometry_variance": m["hygrometry"]["variance"],
        "heat_on_min": m["on_time_min"]["heat"],
        "fog_on_min": m["on_time_min"]["fog"],
    }


def _verdict(a: float, b: float) -> str:
    return "a" if a < b else "b" if b < a else "tie"


def compare(a: Scenario, b: Scenario, parallel: bool = False) -> dict:
    """Run two scenarios on the same night and tabulate their metrics.

    Lower absolute mean error and lower variance win.
    """
    if a.duration != b.duration:
        raise ConfigurationError(f"scenario durations differ: {a.duration} vs {b.duration}")
    if not all(np.array_equal(getattr(a.weather, f), getattr(b.weather, f))
               for f in ("t", "te", "he", "rg", "vv")):
        raise ConfigurationError("scenarios do not share the same weather")
    if parallel:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=2) as pool:
            ra, rb = pool.map(run_scenario, (a, b))
    else:
        ra, rb = run_scenario(a), run_scenario(b)
    sa, sb = _summary(ra.metrics), _summary(rb.metrics)
    delta = {k: sa[k] - sb[k] for k in sa}
    heat_ref = max(sa["heat_on_min"], sb["heat_on_min"])
    verdicts = {
        "temperature_abs_mean": _verdict(abs(sa["temperature_mean"]), abs(sb["temperature_mean"])),
        "temperature_variance": _verdict(sa["temperature_variance"], sb["temperature_variance"]),
        "hygrometry_abs_mean": _verdict(abs(sa["hygrometry_mean"]), abs(sb["hygrometry_mean"])),
        "hygrometry_variance": _verdict(sa["hygrometry_variance"], sb["hygrometry_variance"]),
    }
    return {
        "a": {"name": a.name, **sa},
        "b": {"name": b.name, **sb},
        "delta": delta,
        "heat_on_time_rel_diff": abs(delta["heat_on_min"]) / heat_ref if heat_ref > 0 else 0.0,
        "verdicts": verdicts,
    }


# --- estimator demonstration -------------------------------------------------------------

DEMO_DEFAULTS = {
    "kind": "constant",
    "f0": 1.0,
    "step": 1.0,
    "step_time": 30.0,
    "amplitude": 1.0,
    "period": 60.0,
    "duration": 120.0,
    "ts": 0.1,
    "window": 6.0,
    "alpha": 1.0,
    "k_p": 2.0,
    "driver": "algebraic",
}


def demo_signal(spec: dict):
    kind = spec["kind"]
    f0 = float(spec["f0"])
    if kind == "constant":
        return lambda t: f0
    if kind == "step":
        t0, step = float(spec["step_time"]), float(spec["step"])
        return lambda t: f0 + (step if t >= t0 else 0.0)
    if kind == "sine":
        a, per = float(spec["amplitude"]), float(spec["period"])
        return lambda t: f0 + a * math.sin(2.0 * math.pi * t / per)
    raise ConfigurationError(f"unknown signal kind {kind!r}")


def estimate_demo(spec: dict) -> dict[str, np.ndarray]:
    """Side-by-side estimator traces on ``y' = F(t) + alpha*u`` under iP control to y* = 0.

    ``driver`` picks the F estimate the iP uses: ``algebraic`` (default),
    ``closed_loop`` or ``exact``; both estimates are always computed from
    the same window. Columns are NaN until the window is full.
    """
    s = {**DEMO_DEFAULTS, **spec}
    F = demo_signal(s)
    ts, tau = float(s["ts"]), float(s["window"])
    model, gains = UltraLocalModel(float(s["alpha"])), GainSet(float(s["k_p"]))
    window = SlidingWindow.for_span(tau, ts)
    cfg = EstimatorConfig(tau=tau, alpha=model.alpha, k_p=gains.k_p)
    n = int(round(float(s["duration"]) / ts)) + 1
    out = {k: np.full(n, np.nan) for k in ("t", "f_true", "f_est_algebraic", "f_est_closed_loop")}
    y, nsub = 0.0, 10
    for k in range(n):
        t = k * ts
        f_alg = f_cl = math.nan
        if window.is_full:
            f_alg = algebraic_estimate(window, cfg)
            f_cl = closed_loop_estimate(window, cfg)
        driver = {"algebraic": f_alg, "closed_loop": f_cl, "exact": F(t)}[s["driver"]]
        f_used = 0.0 if math.isnan(driver) else driver
        u = ip_control(f_used, y, 0.0, 0.0, gains, model)
        window.push(WindowEntry(t, y, u, y, 0.0))
        out["t"][k], out["f_true"][k] = t, F(t)
        out["f_est_algebraic"][k], out["f_est_closed_loop"][k] = f_alg, f_cl
        # RK4 on y' = F(t) + alpha*u with u held over the sample
        h = ts / nsub
        for j in range(nsub):
            tj = t + j * h
            k1 = F(tj) + model.alpha * u
            k2 = F(tj + 0.5 * h) + model.alpha * u
            k4 = F(tj + h) + model.alpha * u
            y += h / 6.0 * (k1 + 4.0 * k2 + k4)
    return out


def demo_csv_text(trace: dict[str, np.ndarray]) -> str:
    buf = io.StringIO()
    keys = ("t", "f_true", "f_est_algebraic", "f_est_closed_loop")
    buf.write(",".join(keys) + "\n")
    for row in zip(*(trace[k] for k in keys)):
        buf.write(",".join("" if math.isnan(v) else repr(float(v)) for v in row) + "\n")
    return buf.getvalue()
