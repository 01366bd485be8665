"""Pure-Python plant integration kernel (fallback for ``_kernel.pyx``).

Keep the arithmetic in the same order as the Cython version so both
backends produce identical trajectories.
"""
import math


def plant_rhs(ti, hi, ch, br, ov, om, te, he, rg, vv, p):
    k_loss, k_sun, k_heat, k_fog_t, k_vent, k_wind, k_hx, k_dry, k_fog_h, k_vent_h = p
    dti = (k_loss * (te - ti) + k_sun * rg * (1.0 - om) + k_heat * ch - k_fog_t * br
           + k_vent * ov * (te - ti) * (1.0 + k_wind * vv))
    dhi = k_hx * (he - hi) - k_dry * ch + k_fog_h * br - k_vent_h * ov * (hi - he)
    return dti, dhi


def rk4_step(ti, hi, ch, br, ov, om, w0, w1, s0, h, period, p):
    """One RK4 step from period-local time ``s0``; weather is linear in time within the period."""
    te0, he0, rg0, vv0 = w0
    te1, he1, rg1, vv1 = w1
    hh = 0.5 * h
    f = s0 / period
    k1t, k1h = plant_rhs(ti, hi, ch, br, ov, om,
                         te0 + (te1 - te0) * f, he0 + (he1 - he0) * f,
                         rg0 + (rg1 - rg0) * f, vv0 + (vv1 - vv0) * f, p)
    f = (s0 + hh) / period
    tem = te0 + (te1 - te0) * f
    hem = he0 + (he1 - he0) * f
    rgm = rg0 + (rg1 - rg0) * f
    vvm = vv0 + (vv1 - vv0) * f
    k2t, k2h = plant_rhs(ti + hh * k1t, hi + hh * k1h, ch, br, ov, om, tem, hem, rgm, vvm, p)
    k3t, k3h = plant_rhs(ti + hh * k2t, hi + hh * k2h, ch, br, ov, om, tem, hem, rgm, vvm, p)
    f = (s0 + h) / period
    k4t, k4h = plant_rhs(ti + h * k3t, hi + h * k3h, ch, br, ov, om,
                         te0 + (te1 - te0) * f, he0 + (he1 - he0) * f,
                         rg0 + (rg1 - rg0) * f, vv0 + (vv1 - vv0) * f, p)
    ti = ti + h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
    hi = hi + h / 6.0 * (k1h + 2.0 * k2h + 2.0 * k3h + k4h)
    return ti, min(max(hi, 0.0), 100.0)


def simulate_period(ti, hi, heat, fog, ov, om, w0, w1, p, period, nsub):
    """Integrate one control period driven by per-slot Boolean heat/fog waveforms.

    ``heat`` and ``fog`` have one entry per PWM slot; each slot is split
    into ``nsub`` RK4 steps.
    """
    n_slots = len(heat)
    slot = period / n_slots
    h = slot / nsub
    p = tuple(p)
    w0 = tuple(w0)
    w1 = tuple(w1)
    for j in range(n_slots):
        ch = 1.0 if heat[j] else 0.0
        br = 1.0 if fog[j] else 0.0
        base = j * slot
        for k in range(nsub):
            ti, hi = rk4_step(ti, hi, ch, br, ov, om, w0, w1, base + k * h, h, period, p)
        if not (math.isfinite(ti) and math.isfinite(hi)):
            return ti, hi
    return ti, hi
