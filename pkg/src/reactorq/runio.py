"""Run-directory persistence: CSV tables, trajectory files, model files.

All numeric output uses 17 significant digits, so round-trips are exact and
identical runs produce byte-identical artifacts.
"""

import csv
import os

import numpy as np

from reactorq.approx import read_model_block, write_model_block
from reactorq.fqi import PolicyModel, QModel


def fmt(value):
    if isinstance(value, (float, np.floating)):
        return f"{value:.17g}"
    return str(value)


def emit_csv(header, rows, path):
    """Rectangular table -> CSV with a header row, newline-terminated."""
    width = len(header)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            if len(row) != width:
                raise ValueError(
                    f"row width {len(row)} != header width {width}")
            writer.writerow([fmt(v) for v in row])


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, list(reader)


def emit_trajectory_csv(model, trajectory, path):
    """Columns: t, state components, action, stage_reward, cumulative_reward.

    The final boundary row has no action/reward (blank cells).
    """
    header = ["t", *model.state_names, "action", "stage_reward",
              "cumulative_reward"]
    rows = []
    cumulative = 0.0
    n_stages = len(trajectory.actions)
    for i, t in enumerate(trajectory.times):
        row = [fmt(t), *(fmt(v) for v in trajectory.states[i])]
        if i < n_stages:
            cumulative += trajectory.stage_rewards[i]
            row += [fmt(trajectory.actions[i]),
                    fmt(trajectory.stage_rewards[i]), fmt(cumulative)]
        else:
            row += ["", "", ""]
        rows.append(row)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def save_qmodel(qmodel: QModel, path):
    with open(path, "w") as fh:
        fh.write("qmodel v1\n")
        fh.write(f"mode {qmodel.mode}\n")
        fh.write(f"horizon {qmodel.horizon}\n")
        fh.write("action_grid "
                 + " ".join(repr(float(v)) for v in qmodel.action_grid) + "\n")
        fh.write(f"n_regressors {len(qmodel.regressors)}\n")
        for regressor in qmodel.regressors:
            write_model_block(regressor, fh)


def load_qmodel(path) -> QModel:
    with open(path) as fh:
        if fh.readline().strip() != "qmodel v1":
            raise ValueError(f"not a qmodel file: {path}")
        mode = fh.readline().split()[1]
        horizon_tok = fh.readline().split()[1]
        horizon = None if horizon_tok == "None" else int(horizon_tok)
        grid = np.array([float(v) for v in fh.readline().split()[1:]])
        n = int(fh.readline().split()[1])
        regressors = [read_model_block(fh) for _ in range(n)]
    return QModel(regressors=regressors, action_grid=grid, mode=mode,
                  horizon=horizon)


def save_policy(policy: PolicyModel, path):
    with open(path, "w") as fh:
        fh.write("policy v1\n")
        fh.write(f"mode {policy.mode}\n")
        fh.write(f"bounds {policy.action_low!r} {policy.action_high!r}\n")
        fh.write(f"n_regressors {len(policy.regressors)}\n")
        for regressor in policy.regressors:
            write_model_block(regressor, fh)


def load_policy(path) -> PolicyModel:
    with open(path) as fh:
        if fh.readline().strip() != "policy v1":
            raise ValueError(f"not a policy file: {path}")
        mode = fh.readline().split()[1]
        _, lo, hi = fh.readline().split()
        n = int(fh.readline().split()[1])
        regressors = [read_model_block(fh) for _ in range(n)]
    return PolicyModel(regressors=regressors, action_low=float(lo),
                       action_high=float(hi), mode=mode)


def ensure_run_dir(out_dir, run_hash):
    path = os.path.join(out_dir, run_hash)
    os.makedirs(path, exist_ok=True)
    return path
