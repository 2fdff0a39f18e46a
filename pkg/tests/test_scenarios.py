"""Disturbance-scenario tests: window snapping, mode semantics, ranking."""

import numpy as np
import pytest

from reactorq.baselines import Schedule
from reactorq.models import make_model
from reactorq.scenarios import (DO_NOTHING, INTELLIGENT, MODES, NOMINAL,
                                Disturbance, compare_modes, final_metric,
                                run_scenario)


def _nominal(model, value):
    return Schedule(actions=np.full(model.n_stages, value))


def test_stage_window_snaps_to_stage_boundaries():
    model = make_model("batch_ab")  # stage duration 0.1 h
    assert Disturbance(0.2, 0.6, 298.0).stage_window(model) == (2, 6)
    assert Disturbance(0.24, 0.56, 298.0).stage_window(model) == (2, 6)
    assert Disturbance(0.0, 1.0, 298.0).stage_window(model) == (0, 10)


def test_stage_window_outside_horizon_rejected():
    model = make_model("batch_ab")
    with pytest.raises(ValueError):
        Disturbance(0.5, 1.5, 298.0).stage_window(model)
    with pytest.raises(ValueError):
        Disturbance(0.6, 0.2, 298.0).stage_window(model)


def test_unknown_mode_rejected():
    model = make_model("batch_ab")
    with pytest.raises(ValueError):
        run_scenario(model, lambda s, st: 340.0, _nominal(model, 340.0),
                     Disturbance(0.2, 0.4, 298.0), "improvise")


def test_all_modes_share_the_pre_disturbance_prefix():
    model = make_model("batch_ab")
    nominal = _nominal(model, 350.0)
    disturbance = Disturbance(0.3, 0.5, 298.0)
    trajectories = [run_scenario(model, lambda s, st: 370.0, nominal,
                                 disturbance, mode) for mode in MODES]
    for traj in trajectories:
        assert np.array_equal(traj.actions[:3], [350.0] * 3)  # nominal prefix
        assert np.array_equal(traj.actions[3:5], [298.0] * 2)  # forced window
        assert np.array_equal(traj.states[:6], trajectories[0].states[:6])


def test_mode_semantics_after_the_window():
    model = make_model("batch_ab")
    nominal = _nominal(model, 350.0)
    disturbance = Disturbance(0.3, 0.5, 298.0)
    seen_stages = []

    def policy(state, stage):
        seen_stages.append(stage)
        return 370.0

    intel = run_scenario(model, policy, nominal, disturbance, INTELLIGENT)
    nom = run_scenario(model, policy, nominal, disturbance, NOMINAL)
    dn = run_scenario(model, policy, nominal, disturbance, DO_NOTHING)
    assert np.all(intel.actions[5:] == 370.0)   # policy takes over
    assert np.all(nom.actions[5:] == 350.0)     # schedule resumes
    assert np.all(dn.actions[5:] == 298.0)      # failure persists
    assert seen_stages == list(range(5, 10))    # policy only queried post-window


def test_zero_length_effect_when_window_matches_nominal():
    """Forcing the nominal value is a no-op for the nominal-schedule mode."""
    model = make_model("batch_ab")
    nominal = _nominal(model, 350.0)
    disturbance = Disturbance(0.3, 0.5, 350.0)
    nom = run_scenario(model, lambda s, st: 370.0, nominal, disturbance,
                       NOMINAL)
    from reactorq.integrate import rollout
    undisturbed = rollout(model, nominal)
    assert np.array_equal(nom.states, undisturbed.states)
    assert np.array_equal(nom.actions, np.full(10, 350.0))


def test_forced_action_is_projected_to_feasibility():
    """An infeasible forced feed rate gets projected like any other action."""
    model = make_model("fed_batch")
    nominal = _nominal(model, 0.004)
    disturbance = Disturbance(0.0, 120.0, 10.0)  # absurd pump setpoint
    with pytest.warns(UserWarning, match="outside bounds"):
        traj = run_scenario(model, lambda s, st: 0.0, nominal, disturbance,
                            DO_NOTHING)
    assert np.all(traj.actions <= model.params.u_max)
    assert traj.final_state[4] <= model.params.v_max + 1e-9


def test_short_nominal_schedule_holds_last_action():
    """Minimum-time nominal plans shorter than the horizon replay their tail."""
    model = make_model("semi_batch")
    nominal = Schedule(actions=np.array([0.1, 0.1, 0.1, 0.1]))
    disturbance = Disturbance(5.0, 10.0, 0.0)  # pump failure, stages 1-2
    traj = run_scenario(model, lambda s, st: 0.1, nominal, disturbance,
                        NOMINAL)
    assert len(traj.actions) >= 4


def test_compare_modes_ranking_orientation():
    model = make_model("batch_ab")
    nominal = _nominal(model, 340.0)
    report = compare_modes(model, lambda s, st: 340.0, nominal,
                           Disturbance(0.2, 0.4, 298.0))
    assert set(report.trajectories) == set(MODES)
    ordered = [report.final_metrics[m] for m in report.ranking]
    assert ordered == sorted(ordered, reverse=True)  # yields rank descending

    semi = make_model("semi_batch")
    semi_nominal = Schedule(actions=np.full(semi.n_stages, 0.1))
    semi_report = compare_modes(semi, lambda s, st: 0.1, semi_nominal,
                                Disturbance(5.0, 10.0, 0.0))
    ordered = [semi_report.final_metrics[m] for m in semi_report.ranking]
    assert ordered == sorted(ordered)  # completion times rank ascending


def test_final_metric_kinds():
    batch = make_model("batch_ab")
    traj = run_scenario(batch, lambda s, st: 340.0, _nominal(batch, 340.0),
                        Disturbance(0.2, 0.4, 298.0), NOMINAL)
    assert final_metric(batch, traj) == batch.yield_value(traj.final_state)

    semi = make_model("semi_batch")
    semi_traj = run_scenario(semi, lambda s, st: 0.1,
                             Schedule(actions=np.full(10, 0.1)),
                             Disturbance(5.0, 10.0, 0.1), NOMINAL)
    assert final_metric(semi, semi_traj) == semi_traj.completion_time
