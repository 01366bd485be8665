# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled plant integration kernel; mirrors ``_kernel_py`` operation for operation."""
from libc.math cimport isfinite


cdef inline void _rhs(double ti, double hi, double ch, double br, double ov, double om,
                      double te, double he, double rg, double vv, const double* p,
                      double* dti, double* dhi) noexcept nogil:
    dti[0] = (p[0] * (te - ti) + p[1] * rg * (1.0 - om) + p[2] * ch - p[3] * br
              + p[4] * ov * (te - ti) * (1.0 + p[5] * vv))
    dhi[0] = p[6] * (he - hi) - p[7] * ch + p[8] * br - p[9] * ov * (hi - he)


def simulate_period(double ti, double hi, heat, fog, double ov, double om,
                    w0, w1, p, double period, int nsub):
    cdef const unsigned char[:] hv = memoryview(bytes(bytearray(1 if x else 0 for x in heat)))
    cdef const unsigned char[:] fv = memoryview(bytes(bytearray(1 if x else 0 for x in fog)))
    cdef double pp[10]
    cdef int i
    for i in range(10):
        pp[i] = p[i]
    cdef double te0 = w0[0], he0 = w0[1], rg0 = w0[2], vv0 = w0[3]
    cdef double te1 = w1[0], he1 = w1[1], rg1 = w1[2], vv1 = w1[3]
    cdef Py_ssize_t n_slots = hv.shape[0]
    cdef double slot = period / n_slots
    cdef double h = slot / nsub
    cdef double hh = 0.5 * h
    cdef double ch, br, base, s0, f, tem, hem, rgm, vvm
    cdef double k1t, k1h, k2t, k2h, k3t, k3h, k4t, k4h
    cdef Py_ssize_t j
    cdef int k
    with nogil:
        for j in range(n_slots):
            ch = 1.0 if hv[j] else 0.0
            br = 1.0 if fv[j] else 0.0
            base = j * slot
            for k in range(nsub):
                s0 = base + k * h
                f = s0 / period
                _rhs(ti, hi, ch, br, ov, om,
                     te0 + (te1 - te0) * f, he0 + (he1 - he0) * f,
                     rg0 + (rg1 - rg0) * f, vv0 + (vv1 - vv0) * f, pp, &k1t, &k1h)
                f = (s0 + hh) / period
                tem = te0 + (te1 - te0) * f
                hem = he0 + (he1 - he0) * f
                rgm = rg0 + (rg1 - rg0) * f
                vvm = vv0 + (vv1 - vv0) * f
                _rhs(ti + hh * k1t, hi + hh * k1h, ch, br, ov, om, tem, hem, rgm, vvm, pp, &k2t, &k2h)
                _rhs(ti + hh * k2t, hi + hh * k2h, ch, br, ov, om, tem, hem, rgm, vvm, pp, &k3t, &k3h)
                f = (s0 + h) / period
                _rhs(ti + h * k3t, hi + h * k3h, ch, br, ov, om,
                     te0 + (te1 - te0) * f, he0 + (he1 - he0) * f,
                     rg0 + (rg1 - rg0) * f, vv0 + (vv1 - vv0) * f, pp, &k4t, &k4h)
                ti = ti + h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
                hi = hi + h / 6.0 * (k1h + 2.0 * k2h + 2.0 * k3h + k4h)
                if hi < 0.0:
                    hi = 0.0
                elif hi > 100.0:
                    hi = 100.0
            if not (isfinite(ti) and isfinite(hi)):
                break
    return ti, hi
