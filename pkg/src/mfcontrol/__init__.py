"""Model-free control: intelligent P/PI controllers with sliding-window estimation of
the ultra-local term, Boolean baselines, actuator fault injection and a synthetic
greenhouse harness."""
from .actuation import (DutyCycle, FogSchedule, HysteresisConfig, boolean_fog, boolean_heat, pwm_waveform,
                        to_duty)
from .control import (ConstantReference, ErrorIntegrator, GainSet, StepReference, UltraLocalModel, ip_control,
                      ipi_control, predict_error, tracking_error)
from .errors import (ConfigurationError, InsufficientDataError, IntegratorFault, NonMonotonicSampleError,
                     WeatherLoadError)
from .estimation import (EstimatorConfig, SlidingWindow, WindowEntry, algebraic_estimate, closed_loop_estimate,
                         push_sample)
from .fault import FaultProfile, apply_fault, effective_f
from .greenhouse import (ActuatorInputs, GreenhouseParams, PlantState, SensorModel, WeatherPoint, read_sensors,
                         step_plant)
from .harness import Scenario, builtin_scenario, compare, estimate_demo, run_scenario
from .kernel import BACKEND
from .metrics import TrackingStats, actuator_on_time, hygrometry_guard, tracking_stats
from .references import DEFAULT_SCHEDULE, ReferenceSchedule, Species, reference_at
from .weather import WeatherTrace, load_weather_csv, synth_night_weather

__version__ = "0.1.0"
