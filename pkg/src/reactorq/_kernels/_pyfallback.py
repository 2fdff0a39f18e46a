"""Pure-Python stage-simulation kernels.

Mirror of ``_speedups.pyx`` (keep the arithmetic order identical in both so
the backends produce the same floating-point results). One kernel call
integrates a full control stage: ``n_sub`` RK4 substeps under a held action,
flooring physically nonnegative components at zero after each substep.

Model ids:
  1  batch A->B->C        state (x1, x2)            params (ka, Ea, kb, Eb)
  2  fed-batch A+B->C,2B->D  state (cA,cB,cC,cD,V)  params (k1, k2, b_feed)
  3  semi-batch A+B->C    state (cA, cB, V)         params (k, cB_in)
"""

import math

import numpy as np

BACKEND = "python"

MODEL_BATCH_AB = 1
MODEL_FED_BATCH = 2
MODEL_SEMI_BATCH = 3

# components floored at zero (concentrations / mole fractions, never volume)
_CLAMP_DIMS = {MODEL_BATCH_AB: 2, MODEL_FED_BATCH: 4, MODEL_SEMI_BATCH: 2}


def _derivs(model_id, p, s, u, out):
    if model_id == MODEL_BATCH_AB:
        r1 = p[0] * math.exp(-p[1] / u) * s[0] * s[0]
        r2 = p[2] * math.exp(-p[3] / u) * s[1]
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


def simulate_stage_raw(model_id, params, state, u, dt, n_sub):
    """Integrate one stage; return (next_state, clamp_count, component max).

    ``comp_max`` is the elementwise maximum of the state over the initial
    point and every post-substep point; callers use it for path constraints
    (peak cB, peak V).
    """
    n = len(state)
    s = [float(v) for v in state]
    p = [float(v) for v in params]
    k1 = [0.0] * n
    k2 = [0.0] * n
    k3 = [0.0] * n
    k4 = [0.0] * n
    tmp = [0.0] * n
    comp_max = list(s)
    clamp_count = 0
    n_clamp = _CLAMP_DIMS[model_id]
    half = 0.5 * dt
    sixth = dt / 6.0

    for _ in range(n_sub):
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
            if not math.isfinite(s[i]):
                raise FloatingPointError(
                    f"non-finite state during stage integration: {s}")
            if s[i] > comp_max[i]:
                comp_max[i] = s[i]

    return np.array(s), clamp_count, np.array(comp_max)
