"""Fixed-step RK4 stage integration and open/closed-loop rollout drivers.

Control is piecewise constant: one action held over each stage, integrated
with ``substeps_per_stage`` RK4 substeps. The per-model hot path goes
through the compiled kernel backend (see reactorq._kernels); the generic
``rk4_step`` here serves arbitrary systems and the reference oracles in the
test suite.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from reactorq import _kernels
from reactorq.models import MINIMUM_TIME


class IntegrationError(ArithmeticError):
    """Non-finite state produced during integration."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


@dataclass(frozen=True)
class IntegratorConfig:
    substeps_per_stage: int = 20

    def __post_init__(self):
        if self.substeps_per_stage < 1:
            raise ValueError("substeps_per_stage must be >= 1")


@dataclass
class StageResult:
    next_state: np.ndarray
    stage_reward: float
    clamp_count: int
    volume_cap_active: bool = False
    safety_cap_active: bool = False


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray          # (len(times), n_states)
    actions: np.ndarray         # one per stage
    stage_rewards: np.ndarray   # one per stage
    objective: float

    @property
    def final_state(self):
        return self.states[-1]

    @property
    def completion_time(self):
        """Time credited by the rewards; meaningful for minimum-time runs."""
        return -self.objective


def rk4_step(state, action, dt, derivs):
    """One classical 4th-order Runge-Kutta step of d(state)/dt = derivs."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    state = np.asarray(state, dtype=float)
    k1 = np.asarray(derivs(state, action), dtype=float)
    k2 = np.asarray(derivs(state + 0.5 * dt * k1, action), dtype=float)
    k3 = np.asarray(derivs(state + 0.5 * dt * k2, action), dtype=float)
    k4 = np.asarray(derivs(state + dt * k3, action), dtype=float)
    out = state + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    if not np.all(np.isfinite(out)):
        raise IntegrationError(f"non-finite RK4 update from state {state}",
                               state=state)
    return out


def _simulate_stage_generic(model, state, action, dt, n_sub):
    """rk4_step loop for models without a compiled kernel (toy systems)."""
    n_clamp = getattr(model, "clamp_dims", 0)
    comp_max = state.copy()
    clamp_count = 0
    for _ in range(n_sub):
        state = rk4_step(state, action, dt, model.derivs)
        for i in range(n_clamp):
            if state[i] < 0.0:
                state[i] = 0.0
                clamp_count += 1
        np.maximum(comp_max, state, out=comp_max)
    return state, clamp_count, comp_max


def simulate_stage(model, state, action, config=None, stage_duration=None):
    """Integrate one control stage of `model` under a held, feasible action."""
    config = config or IntegratorConfig()
    if stage_duration is None:
        stage_duration = model.stage_duration
    dt = stage_duration / config.substeps_per_stage
    state = np.asarray(state, dtype=float)
    kernel_id = getattr(model, "kernel_id", None)
    if kernel_id is None:
        next_state, clamp_count, comp_max = _simulate_stage_generic(
            model, state, float(action), dt, config.substeps_per_stage)
    else:
        try:
            next_state, clamp_count, comp_max = _kernels.simulate_stage_raw(
                kernel_id, model.kernel_params, state, float(action), dt,
                config.substeps_per_stage)
        except FloatingPointError as exc:
            raise IntegrationError(str(exc), state=state) from exc
    reward = model.stage_reward(state, next_state, stage_duration)
    result = StageResult(next_state=next_state, stage_reward=reward,
                         clamp_count=clamp_count)
    params = getattr(model, "params", None)
    v_max = getattr(params, "v_max", None)
    if v_max is not None:
        v_idx = model.state_names.index("v")
        result.volume_cap_active = bool(comp_max[v_idx] > v_max + 1e-9)
    cb_max = getattr(params, "cb_max", None)
    if cb_max is not None:
        result.safety_cap_active = bool(comp_max[1] > cb_max + 1e-6)
    return result


def _resolve_controller(controller):
    """Return fn(state, stage_index) -> requested action."""
    actions = getattr(controller, "actions", None)
    if actions is not None:
        return lambda state, stage: actions[stage]
    if callable(controller):
        return controller
    act = getattr(controller, "action", None)
    if act is not None:
        return lambda state, stage: act(state, stage)
    raise TypeError(f"cannot interpret controller {controller!r}")


def rollout(model, controller, initial_state=None, config=None, n_stages=None):
    """Roll the model forward under a schedule, fitted policy or callable.

    Every requested action passes through the model's feasibility projection
    before being applied. Minimum-time models stop at the stage in which the
    target is crossed (the crossing is interpolated inside stage_reward).
    """
    config = config or IntegratorConfig()
    if initial_state is None:
        initial_state = model.initial_state()
    if n_stages is None:
        n_stages = model.n_stages
    get_action = _resolve_controller(controller)
    stage_duration = model.stage_duration
    lo, hi = model.action_bounds

    state = np.asarray(initial_state, dtype=float)
    times = [0.0]
    states = [state]
    actions = []
    rewards = []
    min_time = model.objective_kind == MINIMUM_TIME

    for stage in range(n_stages):
        if min_time and model.is_done(state):
            break
        requested = float(get_action(state, stage))
        if not lo <= requested <= hi:
            warnings.warn(
                f"controller action {requested:g} outside bounds "
                f"[{lo:g}, {hi:g}] at stage {stage}; projecting",
                stacklevel=2)
        action = model.project_action(state, requested, stage_duration,
                                      config.substeps_per_stage)
        result = simulate_stage(model, state, action, config)
        state = result.next_state
        times.append(times[-1] + stage_duration)
        states.append(state)
        actions.append(action)
        rewards.append(result.stage_reward)

    return Trajectory(
        times=np.array(times),
        states=np.array(states),
        actions=np.array(actions),
        stage_rewards=np.array(rewards),
        objective=float(sum(rewards)),
    )
