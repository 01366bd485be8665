"""Check (and optionally re-derive) the default greenhouse coefficients.

Targets, all on the shipped default night:
  a) iP heating duty of about 0.20 at Ti* = 18 degC (bisection on k_heat)
  b) open-loop cooling from 18 degC to within 2 degC of Te takes roughly 6 h
  c) one 3-minute fog pulse raises Hi by 2-4 %

Usage: python scripts/calibrate.py [--target-duty 0.20]
"""
import argparse
import dataclasses

import numpy as np

from mfcontrol import ActuatorInputs, GreenhouseParams, PlantState, builtin_scenario, run_scenario, step_plant
from mfcontrol.weather import synth_night_weather


def heat_duty(k_heat: float) -> float:
    sc = builtin_scenario("nominal_ip")
    sc = sc.with_changes(plant={**dataclasses.asdict(sc.params), "k_heat": k_heat})
    return run_scenario(sc).metrics["duty_mean"]["heat"]


def bisect_k_heat(target: float, lo: float = 0.002, hi: float = 0.02, tol: float = 1e-3) -> float:
    # duty decreases with k_heat
    while hi - lo > tol * lo:
        mid = 0.5 * (lo + hi)
        if heat_duty(mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def open_loop_gap(params: GreenhouseParams, hours: float = 6.0) -> tuple[float, float]:
    """Ti - Te at the start and after ``hours`` with every actuator off."""
    trace = builtin_scenario("nominal_ip").weather
    state = PlantState(18.0, 60.0)
    off = ActuatorInputs()
    for k in range(int(hours * 60)):
        state = step_plant(state, off, trace.at(k * 60.0), params, 60.0)
    return 18.0 - trace.at(0.0).te, state.ti - trace.at(hours * 3600.0).te


def fog_pulse_rise(params: GreenhouseParams) -> float:
    trace = synth_night_weather(3600.0, noise=False)
    w = trace.at(0.0)
    # start at the no-fog humidity equilibrium so only the pulse moves Hi
    state = PlantState(w.te, w.he)
    after = step_plant(state, ActuatorInputs(br=1.0), w, params, 180.0)
    return after.hi - state.hi


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--target-duty", type=float, default=0.20)
    ap.add_argument("--bisect", action="store_true", help="re-derive k_heat by bisection")
    args = ap.parse_args()
    params = GreenhouseParams()
    print(f"default k_heat={params.k_heat:g}: iP heating duty {heat_duty(params.k_heat):.3f}")
    if args.bisect:
        k = bisect_k_heat(args.target_duty)
        print(f"bisection: k_heat={k:.5f} gives duty {heat_duty(k):.3f} (target {args.target_duty})")
    gap0, gap6 = open_loop_gap(params)
    print(f"open-loop cooling: Ti - Te goes from {gap0:.1f} to {gap6:.1f} degC in 6 h "
          f"(time constant {1.0 / params.k_loss / 3600.0:.1f} h)")
    print(f"3-minute fog pulse raises Hi by {fog_pulse_rise(params):.2f} %")


if __name__ == "__main__":
    main()
