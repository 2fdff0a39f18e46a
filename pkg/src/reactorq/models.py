"""The three case-study reactor models.

Each model bundles its kinetics, action bounds, constraint projection and
stage-reward rule behind a common interface consumed by the integrator,
the sampler and the optimizers.

Case 2 and case 3 kinetic constants are not hard-coded facts of this code
base: they default to values sourced from the standard literature benchmarks
these reactors come from, and can be overridden through the run config.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from reactorq import _kernels


class DomainError(ValueError):
    """Model evaluated outside its physical domain (e.g. V <= 0)."""


class ConsistencyError(ValueError):
    """Algebraic balance disagrees with the integrated trajectory."""


TERMINAL_YIELD = "terminal-yield"
MINIMUM_TIME = "minimum-time"


@dataclass(frozen=True)
class BatchABParams:
    """Batch A->B->C reactor, temperature-controlled, 1 h horizon."""
    k_a: float = 4000.0
    e_a: float = 2500.0
    k_b: float = 6.2e5
    e_b: float = 5000.0
    t_min: float = 298.0
    t_max: float = 398.0
    t_f: float = 1.0
    n_stages: int = 10


@dataclass(frozen=True)
class FedBatchParams:
    """Fed-batch A+B->C, 2B->D reactor, feed-rate controlled, 120 min horizon.

    k1 and k2 are the standard literature values for this A+B->C / 2B->D
    benchmark family; b_feed is calibrated so the open-loop optimum of this
    configuration lands in the published 0.062-0.064 range. All three can be
    overridden through the run config.
    """
    k1: float = 0.053
    k2: float = 0.128
    b_feed: float = 1.4
    u_min: float = 0.0
    u_max: float = 0.01
    v_max: float = 1.0
    t_f: float = 120.0
    n_stages: int = 10
    init_ca: float = 0.2
    init_v: float = 0.5


@dataclass(frozen=True)
class SemiBatchParams:
    """Semi-batch A+B->C minimum-time reactor with a runaway-safety cap on cB.

    Kinetics and initial load are externally sourced benchmark values
    (Srinivasan/Bonvin semi-batch safety-constrained problem). The safety
    block (dh, rho, cp, temp, temp_max) reproduces cb_max = 0.63 mol/l via
    the adiabatic temperature-rise bound.
    """
    k: float = 0.0482
    cb_in: float = 5.0
    ca0: float = 2.0
    cb0: float = 0.63
    cc0: float = 0.0
    v0: float = 0.7
    v_max: float = 1.0
    u_min: float = 0.0
    u_max: float = 0.1
    cb_max: float = 0.63
    target_cc: float = 0.7
    t_max: float = 50.0
    n_stages: int = 10
    # adiabatic safety data; when given, cb_max is derived from it
    dh: float = -60000.0
    rho: float = 900.0
    cp: float = 4.2
    temp: float = 343.15
    temp_max: float = 353.15


def cb_max_from_safety(params: SemiBatchParams) -> float:
    """Bound on cB keeping the adiabatic temperature rise below temp_max."""
    if -params.dh <= 0.0:
        raise DomainError("reaction must be exothermic (-dh > 0)")
    if params.temp_max < params.temp:
        raise DomainError("temp_max below operating temperature")
    return params.rho * params.cp * (params.temp_max - params.temp) / (-params.dh)


class BatchABModel:
    """Case 1: closed batch A->B->C, control = temperature, maximize final B."""

    name = "batch_ab"
    objective_kind = TERMINAL_YIELD
    state_names = ("x1", "x2")
    n_states = 2
    kernel_id = _kernels.MODEL_BATCH_AB

    def __init__(self, params: BatchABParams | None = None):
        self.params = params or BatchABParams()

    @property
    def kernel_params(self):
        p = self.params
        return (p.k_a, p.e_a, p.k_b, p.e_b)

    @property
    def action_bounds(self):
        return (self.params.t_min, self.params.t_max)

    @property
    def t_f(self):
        return self.params.t_f

    @property
    def n_stages(self):
        return self.params.n_stages

    @property
    def stage_duration(self):
        return self.params.t_f / self.params.n_stages

    def default_action_grid(self):
        return np.linspace(self.params.t_min, self.params.t_max, 11)

    def initial_state(self):
        return np.array([1.0, 0.0])

    def default_init_region(self):
        return [(0.5, 1.0), (0.0, 1.0)]

    def sample_initial_state(self, rng, region):
        (lo1, hi1), (lo2, hi2) = region
        x1 = rng.uniform(lo1, hi1)
        x2 = rng.uniform(lo2, min(hi2, 1.0 - x1))
        return np.array([x1, x2])

    def derivs(self, state, t_kelvin):
        x1, x2 = state
        r1 = self.params.k_a * np.exp(-self.params.e_a / t_kelvin) * x1 * x1
        r2 = self.params.k_b * np.exp(-self.params.e_b / t_kelvin) * x2
        return np.array([-r1, r1 - r2])

    def project_action(self, state, u, stage_duration, substeps=20):
        return float(min(max(u, self.params.t_min), self.params.t_max))

    def yield_value(self, state):
        return float(state[1])

    def stage_reward(self, before, after, dt):
        return self.yield_value(after) - self.yield_value(before)

    def check_state(self, state):
        if state[0] < -1e-9 or state[1] < -1e-9 or state[0] + state[1] > 1.0 + 1e-9:
            raise DomainError(f"infeasible batch_ab state {state}")


class FedBatchModel:
    """Case 2: fed-batch A+B->C / 2B->D, control = feed rate, maximize final C."""

    name = "fed_batch"
    objective_kind = TERMINAL_YIELD
    state_names = ("ca", "cb", "cc", "cd", "v")
    n_states = 5
    kernel_id = _kernels.MODEL_FED_BATCH

    def __init__(self, params: FedBatchParams | None = None):
        self.params = params or FedBatchParams()

    @property
    def kernel_params(self):
        p = self.params
        return (p.k1, p.k2, p.b_feed)

    @property
    def action_bounds(self):
        return (self.params.u_min, self.params.u_max)

    @property
    def t_f(self):
        return self.params.t_f

    @property
    def n_stages(self):
        return self.params.n_stages

    @property
    def stage_duration(self):
        return self.params.t_f / self.params.n_stages

    def default_action_grid(self):
        return np.linspace(self.params.u_min, self.params.u_max, 11)

    def initial_state(self):
        p = self.params
        return np.array([p.init_ca, 0.0, 0.0, 0.0, p.init_v])

    def default_init_region(self):
        p = self.params
        return [(0.1, 0.2), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.5, 0.9)]

    def sample_initial_state(self, rng, region):
        return np.array([rng.uniform(lo, hi) for lo, hi in region])

    def derivs(self, state, u):
        ca, cb, cc, cd, v = state
        if v <= 0.0:
            raise DomainError(f"fed_batch volume must be positive, got {v}")
        p = self.params
        r1 = p.k1 * ca * cb
        r2 = p.k2 * cb * cb
        dil = u / v
        return np.array([
            -r1 - dil * ca,
            -r1 - 2.0 * r2 + dil * (p.b_feed - cb),
            r1 - dil * cc,
            r2 - dil * cd,
            u,
        ])

    def project_action(self, state, u, stage_duration, substeps=20):
        p = self.params
        u = min(max(u, p.u_min), p.u_max)
        # feeding faster than this would overflow v_max by stage end
        return float(max(p.u_min, min(u, (p.v_max - state[4]) / stage_duration)))

    def yield_value(self, state):
        return float(state[2])

    def stage_reward(self, before, after, dt):
        return self.yield_value(after) - self.yield_value(before)

    def check_state(self, state):
        if min(state[:4]) < -1e-9:
            raise DomainError(f"negative concentration in {state}")
        if not 0.0 < state[4] <= self.params.v_max + 1e-9:
            raise DomainError(f"volume out of range in {state}")


class SemiBatchModel:
    """Case 3: semi-batch A+B->C, control = feed rate, minimize time to target C.

    The product concentration cC is not a state: it is reconstructed
    algebraically from the A balance (cc_from_balance).
    """

    name = "semi_batch"
    objective_kind = MINIMUM_TIME
    state_names = ("ca", "cb", "v")
    n_states = 3
    kernel_id = _kernels.MODEL_SEMI_BATCH

    def __init__(self, params: SemiBatchParams | None = None):
        base = params or SemiBatchParams()
        self.params = replace(base, cb_max=cb_max_from_safety(base))

    @property
    def kernel_params(self):
        p = self.params
        return (p.k, p.cb_in)

    @property
    def action_bounds(self):
        return (self.params.u_min, self.params.u_max)

    @property
    def t_f(self):
        return self.params.t_max

    @property
    def n_stages(self):
        return self.params.n_stages

    @property
    def stage_duration(self):
        return self.params.t_max / self.params.n_stages

    def default_action_grid(self):
        return np.linspace(self.params.u_min, self.params.u_max, 11)

    def initial_state(self):
        p = self.params
        return np.array([p.ca0, p.cb0, p.v0])

    def default_init_region(self):
        p = self.params
        return [(0.3 * p.ca0, p.ca0), (p.cb0, p.cb0), (p.v0, p.v0)]

    def sample_initial_state(self, rng, region):
        return np.array([rng.uniform(lo, hi) for lo, hi in region])

    def derivs(self, state, u):
        ca, cb, v = state
        if v <= 0.0:
            raise DomainError(f"semi_batch volume must be positive, got {v}")
        p = self.params
        r1 = p.k * ca * cb
        dil = u / v
        return np.array([
            -r1 - dil * ca,
            -r1 + dil * (p.cb_in - cb),
            u,
        ])

    def cc_from_balance(self, state):
        """Product concentration from the A mole balance."""
        ca, _, v = state
        if v <= 0.0:
            raise DomainError(f"volume must be positive, got {v}")
        p = self.params
        cc = (p.ca0 * p.v0 + p.cc0 * p.v0 - ca * v) / v
        if cc < -1e-9:
            raise ConsistencyError(
                f"negative reconstructed cC ({cc}); integration drift?")
        return float(cc)

    def progress(self, state):
        return self.cc_from_balance(state)

    @property
    def target(self):
        return self.params.target_cc

    def is_done(self, state):
        return self.cc_from_balance(state) >= self.params.target_cc

    def _stage_peak_cb(self, state, u, stage_duration, substeps):
        dt = stage_duration / substeps
        _, _, comp_max = _kernels.simulate_stage_raw(
            self.kernel_id, self.kernel_params, state, u, dt, substeps)
        return comp_max[1]

    def project_action(self, state, u, stage_duration, substeps=20):
        p = self.params
        u = min(max(u, p.u_min), p.u_max)
        u = max(p.u_min, min(u, (p.v_max - state[2]) / stage_duration))
        if u <= 0.0:
            return 0.0
        tol = p.cb_max + 1e-9
        if self._stage_peak_cb(state, u, stage_duration, substeps) <= tol:
            return float(u)
        # u = 0 never raises cB, so a feasible boundary exists in [0, u]
        lo, hi = 0.0, u
        while hi - lo > 1e-6:
            mid = 0.5 * (lo + hi)
            if self._stage_peak_cb(state, mid, stage_duration, substeps) <= tol:
                lo = mid
            else:
                hi = mid
        return float(lo)

    def stage_reward(self, before, after, dt):
        target = self.params.target_cc
        cc_before = self.cc_from_balance(before)
        if cc_before >= target:
            return 0.0
        cc_after = self.cc_from_balance(after)
        if cc_after >= target:
            # credit only the (linearly interpolated) time up to the crossing
            return -dt * (target - cc_before) / (cc_after - cc_before)
        return -dt

    def check_state(self, state):
        p = self.params
        if min(state[:2]) < -1e-9:
            raise DomainError(f"negative concentration in {state}")
        if state[1] > p.cb_max + 1e-6:
            raise DomainError(f"cB exceeds safety cap in {state}")
        if not 0.0 < state[2] <= p.v_max + 1e-9:
            raise DomainError(f"volume out of range in {state}")


MODEL_CLASSES = {
    BatchABModel.name: (BatchABModel, BatchABParams),
    FedBatchModel.name: (FedBatchModel, FedBatchParams),
    SemiBatchModel.name: (SemiBatchModel, SemiBatchParams),
}


def make_model(name: str, param_overrides: dict | None = None):
    """Instantiate a model by name with optional parameter overrides."""
    try:
        model_cls, params_cls = MODEL_CLASSES[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; "
                         f"expected one of {sorted(MODEL_CLASSES)}") from None
    params = params_cls(**(param_overrides or {}))
    return model_cls(params)
