# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled stage-simulation kernels (see _pyfallback.py for the contract).

The arithmetic order matches the pure-Python fallback exactly so both
backends give the same floating-point trajectories.
"""

from libc.math cimport exp, isfinite

import numpy as np

BACKEND = "cython"

DEF MODEL_BATCH_AB = 1
DEF MODEL_FED_BATCH = 2
DEF MODEL_SEMI_BATCH = 3


cdef inline void _derivs(int model_id, double* p, double* s, double u,
                         double* out) noexcept nogil:
    cdef double r1, r2, d
    if model_id == MODEL_BATCH_AB:
        r1 = p[0] * exp(-p[1] / u) * s[0] * s[0]
        r2 = p[2] * exp(-p[3] / u) * s[1]
        out[0] = -r1
        out[1] = r1 - r2
    elif model_id == MODEL_FED_BATCH:
        r1 = p[0] * s[0] * s[1]
        r2 = p[1] * s[1] * s[1]
        d = u / s[4]
        out[0] = -r1 - d * s[0]
        out[1] = -r1 - 2.0 * r2 + d * (p[2] - s[1])
        out[2] = r1 - d * s[2]
        out[3] = r2 - d * s[3]
        out[4] = u
    else:
        r1 = p[0] * s[0] * s[1]
        d = u / s[2]
        out[0] = -r1 - d * s[0]
        out[1] = -r1 + d * (p[1] - s[1])
        out[2] = u


def simulate_stage_raw(int model_id, params, state, double u, double dt,
                       int n_sub):
    """Integrate one stage; return (next_state, clamp_count, component max)."""
    cdef double[8] s, p, k1, k2, k3, k4, tmp, comp_max
    cdef int n = len(state)
    cdef int n_param = len(params)
    cdef int i, step
    cdef int clamp_count = 0
    cdef int n_clamp
    cdef double half = 0.5 * dt
    cdef double sixth = dt / 6.0
    cdef bint bad = False

    if model_id == MODEL_BATCH_AB:
        n_clamp = 2
    elif model_id == MODEL_FED_BATCH:
        n_clamp = 4
    else:
        n_clamp = 2

    for i in range(n):
        s[i] = state[i]
        comp_max[i] = s[i]
    for i in range(n_param):
        p[i] = params[i]

    for step in range(n_sub):
        _derivs(model_id, p, s, u, k1)
        for i in range(n):
            tmp[i] = s[i] + half * k1[i]
        _derivs(model_id, p, tmp, u, k2)
        for i in range(n):
            tmp[i] = s[i] + half * k2[i]
        _derivs(model_id, p, tmp, u, k3)
        for i in range(n):
            tmp[i] = s[i] + dt * k3[i]
        _derivs(model_id, p, tmp, u, k4)
        for i in range(n):
            s[i] = s[i] + sixth * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i])
        for i in range(n_clamp):
            if s[i] < 0.0:
                s[i] = 0.0
                clamp_count += 1
        for i in range(n):
            if not isfinite(s[i]):
                bad = True
            if s[i] > comp_max[i]:
                comp_max[i] = s[i]
        if bad:
            raise FloatingPointError(
                "non-finite state during stage integration: "
                + str([s[i] for i in range(n)]))

    out_s = np.empty(n)
    out_m = np.empty(n)
    for i in range(n):
        out_s[i] = s[i]
        out_m[i] = comp_max[i]
    return out_s, clamp_count, out_m
