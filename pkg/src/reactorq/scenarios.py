"""Disturbance injection and the three intervention modes.

A disturbance clamps the control to a forced value over a window of stages
(window edges snap to stage boundaries; control is stage-constant). After
the window:

intelligent       query the trained state-feedback policy each stage
nominal-schedule  resume the original open-loop schedule
do-nothing        hold the forced value to the end of the run

Every action, forced ones included, still passes through the model's
feasibility projection, so the hard constraints survive any disturbance.
"""

from dataclasses import dataclass, field

import numpy as np

from reactorq.integrate import IntegratorConfig, rollout
from reactorq.models import MINIMUM_TIME

INTELLIGENT = "intelligent"
NOMINAL = "nominal-schedule"
DO_NOTHING = "do-nothing"
MODES = (INTELLIGENT, NOMINAL, DO_NOTHING)


@dataclass(frozen=True)
class Disturbance:
    t_start: float
    t_end: float
    forced_value: float

    def stage_window(self, model):
        """(first forced stage, one past last forced stage), snapped."""
        dt = model.stage_duration
        horizon = model.n_stages * dt
        if not 0.0 <= self.t_start < self.t_end <= horizon + 1e-9:
            raise ValueError(
                f"disturbance window [{self.t_start}, {self.t_end}] outside "
                f"the horizon [0, {horizon}]")
        start = int(round(self.t_start / dt))
        end = int(round(self.t_end / dt))
        return start, end


@dataclass
class ScenarioReport:
    disturbance: Disturbance
    trajectories: dict            # mode -> Trajectory
    final_metrics: dict           # mode -> final yield or completion time
    ranking: list                 # modes best-first


def run_scenario(model, policy, nominal, disturbance: Disturbance, mode,
                 integrator=None):
    """Roll out one intervention mode under the disturbance."""
    if mode not in MODES:
        raise ValueError(f"unknown intervention mode {mode!r}; "
                         f"expected one of {MODES}")
    integrator = integrator or IntegratorConfig()
    start, end = disturbance.stage_window(model)
    nominal_actions = np.asarray(
        getattr(nominal, "actions", nominal), dtype=float)
    forced = disturbance.forced_value

    def nominal_at(stage):
        # minimum-time schedules can be shorter than the horizon (the
        # nominal run finished early); hold the last action when delayed
        return nominal_actions[min(stage, len(nominal_actions) - 1)]

    def controller(state, stage):
        if stage < start:
            return nominal_at(stage)
        if stage < end:
            return forced
        if mode == INTELLIGENT:
            return policy(state, stage)
        if mode == NOMINAL:
            return nominal_at(stage)
        return forced

    return rollout(model, controller, config=integrator)


def final_metric(model, trajectory):
    """Final yield for terminal-yield models, completion time otherwise."""
    if model.objective_kind == MINIMUM_TIME:
        return trajectory.completion_time
    return model.yield_value(trajectory.final_state)


def compare_modes(model, policy, nominal, disturbance: Disturbance,
                  integrator=None) -> ScenarioReport:
    """All three intervention modes under one disturbance, ranked best-first."""
    trajectories = {}
    metrics = {}
    for mode in MODES:
        tr = run_scenario(model, policy, nominal, disturbance, mode, integrator)
        trajectories[mode] = tr
        metrics[mode] = final_metric(model, tr)
    reverse = model.objective_kind != MINIMUM_TIME  # yields rank descending
    ranking = sorted(MODES, key=lambda mode: metrics[mode], reverse=reverse)
    return ScenarioReport(disturbance=disturbance, trajectories=trajectories,
                          final_metrics=metrics, ranking=ranking)
