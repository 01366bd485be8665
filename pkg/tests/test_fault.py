import ast
import inspect
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

import mfcontrol.control as control
from mfcontrol.errors import ConfigurationError
from mfcontrol.fault import FaultProfile, apply_fault, effective_f
from mfcontrol.harness import builtin_scenario, run_scenario


def test_fault_examples():
    prof = FaultProfile(((100.0, 0.5),))
    assert apply_fault(0.8, prof, 50.0) == 0.8
    assert apply_fault(0.8, prof, 100.0) == pytest.approx(0.4)
    assert effective_f(1.0, 2.0, 0.25, 0.4) == pytest.approx(0.8)
    assert apply_fault(0.8, FaultProfile(), 1e6) == 0.8
    with pytest.raises(ValueError):
        apply_fault(0.5, prof, -1.0)


def test_profile_validation():
    with pytest.raises(ConfigurationError):
        FaultProfile(((0.0, 1.0),))
    with pytest.raises(ConfigurationError):
        FaultProfile(((0.0, -0.1),))
    with pytest.raises(ConfigurationError):
        FaultProfile(((10.0, 0.2), (10.0, 0.3)))


def test_piecewise_profile():
    prof = FaultProfile.from_config([{"start_s": 10, "beta": 0.0}, {"start_s": 20, "beta": 0.3},
                                     {"start_s": 30, "beta": 0.1}])
    assert [prof.beta_at(t) for t in (0, 15, 20, 29.9, 1e9)] == [0, 0, 0.3, 0.3, 0.1]
    assert prof.first_fault_time == 20


@given(f=st.floats(-100, 100), alpha=st.floats(0.1, 10), beta=st.floats(0, 0.99), u=st.floats(-10, 10))
def test_faulty_plant_equals_shifted_ultra_local_model(f, alpha, beta, u):
    prof = FaultProfile(((0.0, beta),))
    lhs = f + alpha * apply_fault(u, prof, 1.0)
    rhs = effective_f(f, alpha, beta, u) + alpha * u
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_controller_is_unaware_of_faults():
    tree = ast.parse(Path(control.__file__).read_text())
    imported = {a.name for n in ast.walk(tree) if isinstance(n, ast.Import) for a in n.names}
    imported |= {n.module or "" for n in ast.walk(tree) if isinstance(n, ast.ImportFrom)}
    assert not any("fault" in m for m in imported)
    for fn in (control.ip_control, control.ipi_control):
        assert "beta" not in inspect.signature(fn).parameters


@pytest.mark.slow
def test_post_fault_recovery():
    sc = builtin_scenario("fault50")
    res = run_scenario(sc)
    t, e = res.columns["t_s"], res.columns["ti_c"] - res.columns["ti_ref_c"]
    t_fault = sc.fault.first_fault_time
    settle = t >= t_fault + 5 * sc.window_min * 60
    assert abs(e[settle].mean()) <= 0.5
    assert np.all(np.abs(e[settle]) < 1.5)
