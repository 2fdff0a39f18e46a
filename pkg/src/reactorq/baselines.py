"""Classical open-loop baselines: iterative dynamic programming and a
direct piecewise-constant optimizer.

``idp_optimize`` is the single-trajectory Luus variant: backward stage
sweeps trying candidate actions in a region that contracts geometrically
between passes. ``cvp_optimize`` parameterizes the control as one value per
stage and polishes it with seeded multi-restart Nelder-Mead (labeled
``cvp-direct`` in outputs; it reproduces the reference interior-point
numbers on these smooth problems without an NLP stack).
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from reactorq.integrate import IntegratorConfig, rollout


@dataclass
class Schedule:
    actions: np.ndarray
    objective: float | None = None

    def __len__(self):
        return len(self.actions)


@dataclass
class IdpConfig:
    candidates_per_stage: int = 15
    passes: int = 20
    contraction: float = 0.85
    seed: int = 0

    def __post_init__(self):
        if self.candidates_per_stage < 2:
            raise ValueError("candidates_per_stage must be >= 2")
        if not 0.0 < self.contraction < 1.0:
            raise ValueError("contraction must be in (0, 1)")


@dataclass
class CvpConfig:
    restarts: int = 5
    tol: float = 1e-8
    max_evals: int = 5000
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


def evaluate_schedule(model, schedule, integrator=None) -> float:
    """Open-loop rollout objective of a stage-constant schedule."""
    actions = schedule.actions if isinstance(schedule, Schedule) else schedule
    return rollout(model, Schedule(actions=np.asarray(actions, dtype=float)),
                   config=integrator).objective


def _project_schedule(model, actions, integrator):
    """Stage-by-stage feasibility projection along the simulated path."""
    projected = rollout(model, Schedule(actions=np.asarray(actions, float)),
                        config=integrator).actions
    # minimum-time rollouts may stop early; pad with the last bound clip
    if len(projected) < len(actions):
        lo, hi = model.action_bounds
        tail = np.clip(actions[len(projected):], lo, hi)
        projected = np.concatenate([projected, tail])
    return projected


def idp_optimize(model, config: IdpConfig | None = None,
                 integrator=None) -> tuple[Schedule, list]:
    """Backward-sweep region-contraction search; returns (schedule, trace).

    `trace` holds the incumbent objective after each pass (non-decreasing).
    """
    config = config or IdpConfig()
    integrator = integrator or IntegratorConfig()
    rng = np.random.default_rng(config.seed)
    lo, hi = model.action_bounds
    n_stages = model.n_stages

    incumbent = np.full(n_stages, 0.5 * (lo + hi))
    best_obj = evaluate_schedule(model, incumbent, integrator)
    radius = 0.5 * (hi - lo)
    trace = []
    for _ in range(config.passes):
        for stage in range(n_stages - 1, -1, -1):
            candidates = incumbent[stage] + radius * rng.uniform(
                -1.0, 1.0, config.candidates_per_stage)
            for cand in np.clip(candidates, lo, hi):
                trial = incumbent.copy()
                trial[stage] = cand
                obj = evaluate_schedule(model, trial, integrator)
                if obj > best_obj:
                    best_obj = obj
                    incumbent = trial
        radius *= config.contraction
        trace.append(best_obj)

    actions = _project_schedule(model, incumbent, integrator)
    return Schedule(actions=actions, objective=best_obj), trace


def cvp_optimize(model, config: CvpConfig | None = None,
                 integrator=None) -> tuple[Schedule, list]:
    """Seeded multi-restart Nelder-Mead over the stage-constant space."""
    config = config or CvpConfig()
    integrator = integrator or IntegratorConfig()
    rng = np.random.default_rng(config.seed)
    lo, hi = model.action_bounds
    n_stages = model.n_stages

    def objective(x):
        return -evaluate_schedule(model, np.clip(x, lo, hi), integrator)

    best_x, best_obj = None, -np.inf
    trace = []
    for _ in range(config.restarts):
        x0 = rng.uniform(lo, hi, n_stages)
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"xatol": config.tol, "fatol": config.tol,
                                "maxfev": config.max_evals})
        trace.append(-res.fun)
        if -res.fun > best_obj:
            best_obj = -res.fun
            best_x = np.clip(res.x, lo, hi)

    actions = _project_schedule(model, best_x, integrator)
    return Schedule(actions=actions, objective=best_obj), trace
