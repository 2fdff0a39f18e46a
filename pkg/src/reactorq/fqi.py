"""Fitted Q-iteration over a transition cube, plus policy extraction.

Each iteration regresses Q(state, action) onto one-step lookahead targets
r + max_a' Q(next_state, a'), evaluated exhaustively over the action grid.
The first pass uses the rewards alone (the effective consequence of a
worst-possible initialization).

Two modes:

``stationary``
    One Q-function over (state, action); every sample is bootstrapped from
    the latest fit on every iteration, and a single state-feedback policy is
    extracted at the end.

``finite-horizon`` (the default for the reactor problems, which are all
    fixed-horizon)
    The per-iteration fits are kept: the model produced by iteration h is
    the h-stages-remaining Q-function, so iterating exactly `horizon` times
    yields exact backward induction within the regressor class. The policy
    is one state-feedback regressor per stage.
"""

from dataclasses import dataclass, field

import numpy as np

from reactorq.approx import DEFAULT_LAMBDA, ridge_fit

STATIONARY = "stationary"
FINITE_HORIZON = "finite-horizon"


@dataclass
class EngineConfig:
    n_iterations: int = 30
    mode: str = FINITE_HORIZON
    lam: float = DEFAULT_LAMBDA
    horizon: int | None = None  # finite-horizon only; defaults to the model's n_stages

    def __post_init__(self):
        if self.n_iterations < 1:
            raise ValueError("n_iterations must be >= 1")
        if self.mode not in (STATIONARY, FINITE_HORIZON):
            raise ValueError(f"unknown engine mode {self.mode!r}")


@dataclass
class QModel:
    """Fitted Q-function(s) over (state, action) rows.

    Stationary: `regressors` holds the single final fit. Finite-horizon:
    `regressors[h-1]` is the h-stages-remaining Q-function.
    """
    regressors: list
    action_grid: np.ndarray
    mode: str = STATIONARY
    horizon: int | None = None

    def regressor_for_stage(self, stage):
        if self.mode == STATIONARY:
            return self.regressors[-1]
        if stage is None:
            raise ValueError("finite-horizon Q-model needs a stage index")
        remaining = self.horizon - stage
        if not 1 <= remaining <= len(self.regressors):
            raise ValueError(f"stage {stage} outside horizon {self.horizon}")
        return self.regressors[remaining - 1]


@dataclass
class PolicyModel:
    """State-feedback policy; one regressor (stationary) or one per stage."""
    regressors: list
    action_low: float
    action_high: float
    mode: str = STATIONARY

    def _regressor(self, stage):
        if self.mode == STATIONARY:
            return self.regressors[0]
        if stage is None:
            raise ValueError("finite-horizon policy needs a stage index")
        return self.regressors[min(int(stage), len(self.regressors) - 1)]

    def __call__(self, state, stage=None):
        x = np.asarray(state, dtype=float)
        value = float(self._regressor(stage).predict_batch(x[None, :])[0])
        return min(max(value, self.action_low), self.action_high)

    def action(self, state, stage=None):
        return self(state, stage)


@dataclass
class Diagnostics:
    target_change: list = field(default_factory=list)  # mean |Δtarget| per iter
    fit_residual: list = field(default_factory=list)   # mean squared, per iter
    bellman_residual: float = float("nan")             # final


def _ascending_argmax(values, order):
    """Index of the strict maximum, scanning in `order` (ties -> earliest)."""
    best = order[0]
    for idx in order[1:]:
        if values[idx] > values[best]:
            best = idx
    return best


def _q_inputs(cube):
    m, k = cube.m, cube.k
    return np.hstack([np.repeat(cube.states, k, axis=0),
                      np.tile(cube.action_grid, m)[:, None]])


def _backup(cube, regressor):
    """r + max_a' Q(s', a') over the whole cube, (m, k)."""
    m, k, d = cube.next_states.shape
    flat_next = cube.next_states.reshape(m * k, d)
    rows = np.hstack([np.repeat(flat_next, k, axis=0),
                      np.tile(cube.action_grid, m * k)[:, None]])
    boot = regressor.predict_batch(rows).reshape(m * k, k).max(axis=1)
    return cube.rewards + boot.reshape(m, k)


def q_backup_targets(cube, qmodel: QModel | None, action_grid=None):
    """One-step lookahead targets, (m, k); rewards alone when qmodel is None."""
    if qmodel is None:
        return cube.rewards.copy()
    return _backup(cube, qmodel.regressors[-1])


def run_fqi(cube, config: EngineConfig, make_regressor=None):
    """Iterate backup + regression; returns (QModel, Diagnostics)."""
    if cube.m == 0:
        raise ValueError("empty transition cube")
    if make_regressor is None:
        make_regressor = lambda X, y: ridge_fit(X, y, config.lam)
    n_iterations = config.n_iterations
    horizon = config.horizon
    if config.mode == FINITE_HORIZON:
        if horizon is None:
            raise ValueError("finite-horizon mode needs a horizon")
        # iteration h yields the h-stages-remaining Q; deeper passes add nothing
        n_iterations = min(n_iterations, horizon)

    X = _q_inputs(cube)
    regressors = []
    diag = Diagnostics()
    prev_targets = None
    for iteration in range(n_iterations):
        if regressors:
            targets = _backup(cube, regressors[-1])
        else:
            targets = cube.rewards.copy()
        y = targets.reshape(-1)
        try:
            regressor = make_regressor(X, y)
        except Exception as exc:
            raise RuntimeError(
                f"Q regression failed at iteration {iteration}: {exc}") from exc
        regressors.append(regressor)
        if prev_targets is None:
            diag.target_change.append(float(np.mean(np.abs(targets))))
        else:
            diag.target_change.append(
                float(np.mean(np.abs(targets - prev_targets))))
        prev_targets = targets
        resid = regressor.predict_batch(X) - y
        diag.fit_residual.append(float(np.mean(resid * resid)))

    if config.mode == STATIONARY:
        regressors = regressors[-1:]
    qmodel = QModel(regressors=regressors, action_grid=cube.action_grid,
                    mode=config.mode, horizon=horizon)
    diag.bellman_residual = bellman_residual(qmodel, cube)
    return qmodel, diag


def greedy_action(qmodel: QModel, state, action_grid=None, stage=None):
    """Grid action maximizing Q at `state`; ties -> lowest action value."""
    grid = np.asarray(action_grid if action_grid is not None
                      else qmodel.action_grid, dtype=float)
    state = np.asarray(state, dtype=float)
    rows = np.hstack([np.tile(state, (len(grid), 1)), grid[:, None]])
    values = qmodel.regressor_for_stage(stage).predict_batch(rows)
    order = np.argsort(grid, kind="stable")
    return float(grid[_ascending_argmax(values, order)])


def _greedy_labels(cube, targets, order):
    return np.array([
        cube.action_grid[_ascending_argmax(targets[i], order)]
        for i in range(cube.m)
    ])


def extract_policy(qmodel: QModel, cube, lam=None,
                   make_regressor=None) -> tuple["PolicyModel", np.ndarray]:
    """Greedy labels at every sample, regressed into a policy function.

    Returns (policy, labels) where `labels` are the greedy grid actions for
    the first stage (stationary: the only stage).
    """
    if make_regressor is None:
        if lam is None:
            lam = getattr(qmodel.regressors[-1], "lam", DEFAULT_LAMBDA)
        make_regressor = lambda X, y: ridge_fit(X, y, lam)
    order = np.argsort(cube.action_grid, kind="stable")
    lo = float(cube.action_grid.min())
    hi = float(cube.action_grid.max())

    if qmodel.mode == STATIONARY:
        labels = _greedy_labels(cube, q_backup_targets(cube, qmodel), order)
        regressors = [make_regressor(cube.states, labels)]
        return (PolicyModel(regressors=regressors, action_low=lo,
                            action_high=hi, mode=STATIONARY), labels)

    # finite-horizon: acting at stage s means h = horizon - s stages remain;
    # the labels for depth h come from the targets that produced Q_h
    regressors = [None] * qmodel.horizon
    first_labels = None
    for h in range(1, qmodel.horizon + 1):
        if h == 1:
            targets = cube.rewards.copy()
        else:
            targets = _backup(cube, qmodel.regressors[h - 2])
        labels = _greedy_labels(cube, targets, order)
        regressors[qmodel.horizon - h] = make_regressor(cube.states, labels)
        if h == qmodel.horizon:
            first_labels = labels
    return (PolicyModel(regressors=regressors, action_low=lo, action_high=hi,
                        mode=FINITE_HORIZON), first_labels)


def bellman_residual(qmodel: QModel, cube, action_grid=None):
    """Mean |Q(s,a) - (r + max_a' Q(s',a'))| over the cube.

    Finite-horizon: averaged over depths, comparing Q_h against the backup
    of Q_{h-1} (rewards for h = 1).
    """
    X = _q_inputs(cube)
    if qmodel.mode == STATIONARY:
        targets = q_backup_targets(cube, qmodel)
        q = qmodel.regressors[-1].predict_batch(X).reshape(cube.m, cube.k)
        return float(np.mean(np.abs(q - targets)))
    total = 0.0
    for h in range(1, len(qmodel.regressors) + 1):
        if h == 1:
            targets = cube.rewards
        else:
            targets = _backup(cube, qmodel.regressors[h - 2])
        q = qmodel.regressors[h - 1].predict_batch(X).reshape(cube.m, cube.k)
        total += float(np.mean(np.abs(q - targets)))
    return total / len(qmodel.regressors)
