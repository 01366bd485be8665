import numpy as np
import pytest

from mfcontrol.errors import WeatherLoadError
from mfcontrol.weather import load_weather_csv, synth_night_weather, write_weather_csv

HEADER = "t_s,te_c,he_pct,rg_wm2,vv_kmh\n"


def _csv(tmp_path, body, header=HEADER):
    p = tmp_path / "w.csv"
    p.write_text(header + body)
    return p


def test_load_and_interpolate(tmp_path):
    tr = load_weather_csv(_csv(tmp_path, "0,4,60,0,2\n60,6,70,10,4\n"))
    pt = tr.at(30.0)
    assert (pt.te, pt.he, pt.rg, pt.vv) == (5.0, 65.0, 5.0, 3.0)
    assert tr.at(1e6).te == 6.0
    assert tr.covers(60.0) and not tr.covers(61.0)


def test_roundtrip(tmp_path):
    tr = synth_night_weather(600.0, seed=1)
    p = tmp_path / "out.csv"
    write_weather_csv(tr, p)
    back = load_weather_csv(p)
    assert np.array_equal(back.te, tr.te) and np.array_equal(back.t, tr.t)


@pytest.mark.parametrize("body,header,match", [
    ("0,4,60,0,2\n", "t_s,te_c,he_pct,rg_wm2\n", "missing column"),
    ("0,4,60,0,2\n0,5,60,0,2\n", HEADER, "row 3, column t_s"),
    ("0,4,60,0,2\n60,x,60,0,2\n", HEADER, "row 3, column te_c"),
    ("0,4,101,0,2\n", HEADER, "row 2, column he_pct"),
    ("", HEADER, "no data"),
])
def test_load_errors(tmp_path, body, header, match):
    with pytest.raises(WeatherLoadError, match=match):
        load_weather_csv(_csv(tmp_path, body, header))


def test_synthetic_night_shape():
    tr = synth_night_weather(43200.0, noise=False)
    assert len(tr) == 721 and tr.covers(43200.0)
    assert np.all(tr.rg == 0.0)
    assert np.all(np.diff(tr.te) < 0) and np.all(np.diff(tr.he) > 0)
    assert tr.te[0] == 7.0 and tr.he[-1] == 75.0


def test_synthetic_constant_when_flat():
    tr = synth_night_weather(3600.0, te_start=4.0, te_min=4.0, he_start=70, he_end=70, noise=False)
    assert np.all(tr.te == 4.0) and np.all(tr.he == 70.0)


def test_synthetic_seeded():
    a, b = synth_night_weather(3600.0, seed=5), synth_night_weather(3600.0, seed=5)
    assert np.array_equal(a.te, b.te)
    assert not np.array_equal(a.te, synth_night_weather(3600.0, seed=6).te)
