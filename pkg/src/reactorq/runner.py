"""Experiment orchestration behind the command-line interface.

Every command resolves the config, hashes it, and writes its artifacts into
``out_dir/<hash>/`` together with the resolved config copy, so identical
configs reproduce identical directories.
"""

import os

import numpy as np

from reactorq import runio
from reactorq.baselines import (CvpConfig, IdpConfig, Schedule, cvp_optimize,
                                evaluate_schedule, idp_optimize)
from reactorq.config import config_hash, dump_config
from reactorq.fqi import EngineConfig, extract_policy, greedy_action, run_fqi
from reactorq.integrate import IntegratorConfig, rollout
from reactorq.models import MINIMUM_TIME, make_model
from reactorq.sampling import (SamplingConfig, build_transition_cube,
                               generate_state_samples, save_cube_csv,
                               save_samples_csv)
from reactorq.scenarios import MODES, Disturbance, compare_modes, final_metric
from reactorq.svgchart import emit_svg

Q_LEARNING = "q-learning"
IDP = "idp"
CVP = "cvp-direct"


def build_model(config):
    return make_model(config["model"]["name"], config["model"]["params"])


def integrator_config(config):
    return IntegratorConfig(**config["integrator"])


def sampling_config(config):
    s = config["sampling"]
    return SamplingConfig(n_episodes=s["n_episodes"], n_stages=s["n_stages"],
                          seed=config["seed"],
                          init_state_region=s["init_state_region"],
                          action_grid=s["action_grid"])


def train_pipeline(config):
    """Sample, build the cube, run FQI, extract policy and nominal paths."""
    model = build_model(config)
    integrator = integrator_config(config)
    samp_cfg = sampling_config(config)
    samples = generate_state_samples(model, samp_cfg, integrator)
    cube = build_transition_cube(model, samples, samp_cfg, integrator)
    eng = config["engine"]
    engine_cfg = EngineConfig(n_iterations=eng["n_iterations"],
                              mode=eng["mode"], lam=eng["lambda"],
                              horizon=model.n_stages)
    qmodel, diagnostics = run_fqi(cube, engine_cfg)
    policy, _ = extract_policy(qmodel, cube)
    policy_traj = rollout(model, policy, config=integrator)
    grid_traj = rollout(model,
                        lambda s, st: greedy_action(qmodel, s, stage=st),
                        config=integrator)
    # the open-loop nominal plan: the greedy grid actions, as committed
    # stage by stage along the undisturbed path
    nominal = Schedule(actions=grid_traj.actions,
                       objective=grid_traj.objective)
    return {
        "model": model, "integrator": integrator, "samples": samples,
        "cube": cube, "qmodel": qmodel, "diagnostics": diagnostics,
        "policy": policy, "policy_traj": policy_traj,
        "nominal": nominal, "nominal_traj": grid_traj,
    }


def metric_name(model):
    return ("completion_time" if model.objective_kind == MINIMUM_TIME
            else "final_yield")


def _prepare_run_dir(config):
    run_hash = config_hash(config)
    run_dir = runio.ensure_run_dir(config["out_dir"], run_hash)
    with open(os.path.join(run_dir, "resolved_config.json"), "w") as fh:
        fh.write(dump_config(config))
    return run_dir, run_hash


def _action_series(name, trajectory_or_schedule):
    actions = np.asarray(getattr(trajectory_or_schedule, "actions"))
    return (name, np.arange(len(actions)), actions)


def cmd_train(config):
    run_dir, run_hash = _prepare_run_dir(config)
    art = train_pipeline(config)
    model = art["model"]
    join = lambda name: os.path.join(run_dir, name)

    save_samples_csv(art["samples"], model.state_names, join("samples.csv"))
    save_cube_csv(art["cube"], model.state_names, join("transition_cube.csv"))
    runio.save_qmodel(art["qmodel"], join("qmodel.txt"))
    runio.save_policy(art["policy"], join("policy.txt"))
    runio.emit_trajectory_csv(model, art["policy_traj"],
                              join("trajectory_policy.csv"))
    runio.emit_trajectory_csv(model, art["nominal_traj"],
                              join("trajectory_nominal.csv"))
    runio.emit_csv(["stage", "action"],
                   list(enumerate(art["nominal"].actions)),
                   join("nominal_schedule.csv"))
    diag = art["diagnostics"]
    runio.emit_csv(["iteration", "mean_target_change", "fit_mse"],
                   [(i, diag.target_change[i], diag.fit_residual[i])
                    for i in range(len(diag.target_change))],
                   join("fqi_diagnostics.csv"))
    runio.emit_csv(
        ["config_hash", "metric", "value", "bellman_residual"],
        [(run_hash, metric_name(model),
          final_metric(model, art["policy_traj"]), diag.bellman_residual)],
        join("train_metrics.csv"))
    emit_svg([_action_series("q-learning policy", art["policy_traj"])],
             join("policy_actions.svg"), title=f"{model.name} control profile",
             x_label="stage", y_label="action")
    return {"run_dir": run_dir, "config_hash": run_hash, **art}


def cmd_baseline(config, method):
    run_dir, run_hash = _prepare_run_dir(config)
    model = build_model(config)
    integrator = integrator_config(config)
    if method == "idp":
        idp = config["idp"]
        schedule, trace = idp_optimize(
            model, IdpConfig(candidates_per_stage=idp["candidates_per_stage"],
                             passes=idp["passes"],
                             contraction=idp["contraction"],
                             seed=config["seed"]), integrator)
        label = IDP
    elif method == "cvp":
        cvp = config["cvp"]
        schedule, trace = cvp_optimize(
            model, CvpConfig(restarts=cvp["restarts"], tol=cvp["tol"],
                             max_evals=cvp["max_evals"], seed=config["seed"]),
            integrator)
        label = CVP
    else:
        raise ValueError(f"unknown baseline method {method!r}; use idp or cvp")
    join = lambda name: os.path.join(run_dir, name)
    runio.emit_csv(["stage", "action"], list(enumerate(schedule.actions)),
                   join(f"baseline_{method}_schedule.csv"))
    runio.emit_csv(["pass", "objective"], list(enumerate(trace)),
                   join(f"baseline_{method}_trace.csv"))
    runio.emit_csv(["config_hash", "method", "metric", "value"],
                   [(run_hash, label, metric_name(model),
                     abs(schedule.objective)
                     if model.objective_kind == MINIMUM_TIME
                     else schedule.objective)],
                   join(f"baseline_{method}_metrics.csv"))
    return {"run_dir": run_dir, "config_hash": run_hash,
            "schedule": schedule, "trace": trace}


def cmd_scenario(config, scenario_name):
    scenarios = config["scenarios"]
    if scenario_name not in scenarios:
        raise ValueError(f"scenario {scenario_name!r} not in config; "
                         f"available: {sorted(scenarios)}")
    spec = scenarios[scenario_name]
    run_dir, run_hash = _prepare_run_dir(config)
    art = train_pipeline(config)
    model = art["model"]
    disturbance = Disturbance(t_start=spec["t_start"], t_end=spec["t_end"],
                              forced_value=spec["forced_value"])
    report = compare_modes(model, art["policy"], art["nominal"], disturbance,
                           art["integrator"])
    join = lambda name: os.path.join(run_dir, name)
    series = []
    for mode in MODES:
        tr = report.trajectories[mode]
        runio.emit_trajectory_csv(
            model, tr, join(f"scenario_{scenario_name}_{mode}.csv"))
        series.append(_action_series(mode, tr))
    runio.emit_csv(
        ["config_hash", "scenario", "mode", "metric", "value"],
        [(run_hash, scenario_name, mode, metric_name(model),
          report.final_metrics[mode]) for mode in MODES],
        join(f"scenario_{scenario_name}_summary.csv"))
    emit_svg(series, join(f"scenario_{scenario_name}.svg"),
             title=f"{model.name}: {scenario_name}",
             x_label="stage", y_label="action")
    return {"run_dir": run_dir, "config_hash": run_hash, "report": report,
            **art}


def cmd_compare(config):
    run_dir, run_hash = _prepare_run_dir(config)
    art = train_pipeline(config)
    model = art["model"]
    integrator = art["integrator"]
    idp = config["idp"]
    idp_schedule, _ = idp_optimize(
        model, IdpConfig(candidates_per_stage=idp["candidates_per_stage"],
                         passes=idp["passes"], contraction=idp["contraction"],
                         seed=config["seed"]), integrator)
    cvp = config["cvp"]
    cvp_schedule, _ = cvp_optimize(
        model, CvpConfig(restarts=cvp["restarts"], tol=cvp["tol"],
                         max_evals=cvp["max_evals"], seed=config["seed"]),
        integrator)
    metric = metric_name(model)

    def to_metric(objective):
        return (abs(objective) if model.objective_kind == MINIMUM_TIME
                else objective)

    rows = [
        (run_hash, Q_LEARNING, metric,
         final_metric(model, art["policy_traj"])),
        (run_hash, IDP, metric, to_metric(
            evaluate_schedule(model, idp_schedule, integrator))),
        (run_hash, CVP, metric, to_metric(
            evaluate_schedule(model, cvp_schedule, integrator))),
    ]
    join = lambda name: os.path.join(run_dir, name)
    runio.emit_csv(["config_hash", "method", "metric", "value"], rows,
                   join("compare_summary.csv"))
    emit_svg([_action_series(Q_LEARNING, art["policy_traj"]),
              _action_series(IDP, idp_schedule),
              _action_series(CVP, cvp_schedule)],
             join("compare_profiles.svg"),
             title=f"{model.name} control profiles", x_label="stage",
             y_label="action")
    return {"run_dir": run_dir, "config_hash": run_hash, "summary": rows,
            "idp_schedule": idp_schedule, "cvp_schedule": cvp_schedule, **art}


def run_command(config, command, method=None, scenario=None):
    if command == "train":
        return cmd_train(config)
    if command == "baseline":
        return cmd_baseline(config, method)
    if command == "scenario":
        return cmd_scenario(config, scenario)
    if command == "compare":
        return cmd_compare(config)
    raise ValueError(f"unknown command {command!r}")
