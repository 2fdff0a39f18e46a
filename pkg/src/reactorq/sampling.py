"""Two-phase sample generation.

Phase one runs seeded random-action episodes and records the state at the
start of every stage (m = n_episodes * n_stages rows). Phase two augments
every sampled state with every grid action and simulates one stage each,
yielding the m x k transition cube consumed by the Q-iteration engine.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from reactorq.integrate import IntegratorConfig, simulate_stage


@dataclass
class SamplingConfig:
    n_episodes: int = 40
    n_stages: int = 10
    seed: int = 0
    init_state_region: list | None = None  # per-component (lo, hi); model default if None
    action_grid: np.ndarray | None = None  # model default if None

    def resolve(self, model):
        region = self.init_state_region or model.default_init_region()
        grid = (np.asarray(self.action_grid, dtype=float)
                if self.action_grid is not None else model.default_action_grid())
        if len(grid) < 2 or np.any(np.diff(grid) <= 0):
            raise ValueError("action_grid must be strictly increasing, k >= 2")
        if len(region) != model.n_states:
            raise ValueError(
                f"init_state_region needs {model.n_states} component intervals")
        return region, grid


@dataclass
class StateSampleSet:
    rows: np.ndarray                    # (m, n_states)
    provenance: list                    # (episode, stage) per row

    @property
    def m(self):
        return len(self.rows)


@dataclass
class TransitionCube:
    states: np.ndarray        # (m, d) sampled states
    action_grid: np.ndarray   # (k,) grid action values (regression inputs)
    next_states: np.ndarray   # (m, k, d)
    rewards: np.ndarray       # (m, k)
    stage_index: np.ndarray | None = None  # (m,), set when samples carry stages

    @property
    def m(self):
        return self.states.shape[0]

    @property
    def k(self):
        return len(self.action_grid)


def _episode_rng(seed, episode):
    # one independent stream per (seed, episode): generation order-free
    return np.random.default_rng([seed, episode])


def generate_state_samples(model, config: SamplingConfig,
                           integrator=None) -> StateSampleSet:
    """Random-episode exploration; returns the stage-start states."""
    region, grid = config.resolve(model)
    integrator = integrator or IntegratorConfig()
    rows, provenance = [], []
    for lo, hi in region:
        if lo > hi:
            raise ValueError(f"empty init interval ({lo}, {hi})")
    for ep in range(config.n_episodes):
        rng = _episode_rng(config.seed, ep)
        state = model.sample_initial_state(rng, region)
        model.check_state(state)
        for stage in range(config.n_stages):
            rows.append(state.copy())
            provenance.append((ep, stage))
            u = model.project_action(state, grid[rng.integers(len(grid))],
                                     model.stage_duration,
                                     integrator.substeps_per_stage)
            state = simulate_stage(model, state, u, integrator).next_state
    return StateSampleSet(rows=np.array(rows), provenance=provenance)


def build_transition_cube(model, samples: StateSampleSet,
                          config: SamplingConfig, integrator=None,
                          with_stage_index=False) -> TransitionCube:
    """Augment every sample with every grid action; simulate one stage each."""
    if samples.m == 0:
        raise ValueError("empty sample set")
    _, grid = config.resolve(model)
    integrator = integrator or IntegratorConfig()
    m, k, d = samples.m, len(grid), samples.rows.shape[1]
    next_states = np.empty((m, k, d))
    rewards = np.empty((m, k))
    for i in range(m):
        state = samples.rows[i]
        for j in range(k):
            u = model.project_action(state, grid[j], model.stage_duration,
                                     integrator.substeps_per_stage)
            res = simulate_stage(model, state, u, integrator)
            next_states[i, j] = res.next_state
            rewards[i, j] = res.stage_reward
    stage_index = None
    if with_stage_index:
        stage_index = np.array([stage for _, stage in samples.provenance])
    return TransitionCube(states=samples.rows.copy(), action_grid=grid,
                          next_states=next_states, rewards=rewards,
                          stage_index=stage_index)


def save_samples_csv(samples: StateSampleSet, state_names, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["episode", "stage", *state_names])
        for (ep, stage), row in zip(samples.provenance, samples.rows):
            writer.writerow([ep, stage, *(f"{v:.17g}" for v in row)])


def save_cube_csv(cube: TransitionCube, state_names, path):
    next_names = [f"next_{n}" for n in state_names]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample", "action", *state_names, *next_names,
                         "reward"])
        for i in range(cube.m):
            for j in range(cube.k):
                writer.writerow([
                    i, f"{cube.action_grid[j]:.17g}",
                    *(f"{v:.17g}" for v in cube.states[i]),
                    *(f"{v:.17g}" for v in cube.next_states[i, j]),
                    f"{cube.rewards[i, j]:.17g}",
                ])
