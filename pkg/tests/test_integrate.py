"""Integrator tests: RK4 order, stage simulation accuracy, rollouts."""

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from reactorq.integrate import (IntegrationError, IntegratorConfig,
                                Trajectory, rk4_step, rollout, simulate_stage)
from reactorq.models import make_model


def test_rk4_step_exact_for_cubic_polynomial():
    """RK4 integrates polynomials up to degree 4 in t exactly: x' = 3t^2."""
    # carry t as a state component: x' = 3 t^2, so x(0.5) = 0.125 exactly
    derivs = lambda state, _action: np.array([3.0 * state[1] ** 2, 1.0])
    out = rk4_step(np.array([0.0, 0.0]), 0.0, 0.5, derivs)
    assert out[0] == pytest.approx(0.125, rel=1e-14)


def test_rk4_fourth_order_convergence():
    """Halving the substep shrinks the global error by ~2^4."""
    model = make_model("batch_ab")
    state = model.initial_state()
    action = 360.0
    ref = simulate_stage(model, state, action,
                         IntegratorConfig(substeps_per_stage=640)).next_state
    err = {}
    for n_sub in (5, 10):
        out = simulate_stage(model, state, action,
                             IntegratorConfig(substeps_per_stage=n_sub))
        err[n_sub] = np.max(np.abs(out.next_state - ref))
    ratio = err[5] / err[10]
    assert 12.0 <= ratio <= 20.0


@pytest.mark.parametrize("name,action", [("batch_ab", 350.0),
                                         ("fed_batch", 0.004),
                                         ("semi_batch", 0.03)])
def test_simulate_stage_matches_reference_integrator(name, action):
    model = make_model(name)
    state = model.initial_state()
    sol = solve_ivp(lambda _, y: model.derivs(y, action),
                    (0.0, model.stage_duration), state,
                    rtol=1e-11, atol=1e-13)
    got = simulate_stage(model, state, action).next_state
    assert np.allclose(got, sol.y[:, -1], rtol=1e-6, atol=1e-9)


def test_rk4_step_rejects_nonpositive_dt():
    with pytest.raises(ValueError):
        rk4_step(np.array([1.0]), 0.0, 0.0, lambda s, a: -s)


def test_integrator_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(substeps_per_stage=0)


def test_rollout_accepts_schedule_callable_and_policy_object():
    model = make_model("batch_ab")
    schedule_actions = np.full(model.n_stages, 340.0)

    class WithActions:
        actions = schedule_actions

    class WithAction:
        def action(self, state, stage):
            return 340.0

    t1 = rollout(model, WithActions())
    t2 = rollout(model, lambda s, st: 340.0)
    t3 = rollout(model, WithAction())
    assert np.array_equal(t1.states, t2.states)
    assert np.array_equal(t1.states, t3.states)
    assert np.array_equal(t1.actions, schedule_actions)


def test_rollout_rejects_uninterpretable_controller():
    with pytest.raises(TypeError):
        rollout(make_model("batch_ab"), object())


def test_rollout_objective_is_reward_sum_and_times_are_uniform():
    model = make_model("batch_ab")
    traj = rollout(model, lambda s, st: 320.0)
    assert traj.objective == pytest.approx(float(np.sum(traj.stage_rewards)))
    assert np.allclose(np.diff(traj.times), model.stage_duration)
    assert traj.states.shape == (model.n_stages + 1, model.n_states)


def test_rollout_warns_and_projects_out_of_bounds_actions():
    model = make_model("batch_ab")
    with pytest.warns(UserWarning, match="outside bounds"):
        traj = rollout(model, lambda s, st: 1000.0)
    assert np.all(traj.actions == 398.0)


def test_minimum_time_rollout_stops_at_target():
    model = make_model("semi_batch")
    traj = rollout(model, lambda s, st: 0.1)
    assert len(traj.actions) < model.n_stages
    assert model.is_done(traj.final_state)
    # completion time: full stages plus the interpolated final fraction
    dt = model.stage_duration
    assert (len(traj.actions) - 1) * dt < traj.completion_time
    assert traj.completion_time <= len(traj.actions) * dt


def test_simulate_stage_reports_cap_flags():
    model = make_model("semi_batch")
    state = np.array([1.0, 0.2, 0.99])
    res = simulate_stage(model, state, 0.1)  # unprojected: overfills
    assert res.volume_cap_active
    ok = simulate_stage(model, state,
                        model.project_action(state, 0.1,
                                             model.stage_duration))
    assert not ok.volume_cap_active


def test_integration_error_carries_state():
    model = make_model("batch_ab")

    class Exploding:
        kernel_id = model.kernel_id
        kernel_params = (1e308, -1e4, 1e308, -1e4)
        stage_duration = 1.0
        state_names = model.state_names

        @staticmethod
        def stage_reward(before, after, dt):
            return 0.0

    with pytest.raises(IntegrationError):
        simulate_stage(Exploding(), np.array([1e200, 1e200]), 398.0)


def test_trajectory_completion_time_sign():
    traj = Trajectory(times=np.array([0.0, 1.0]),
                      states=np.zeros((2, 1)), actions=np.array([0.0]),
                      stage_rewards=np.array([-1.0]), objective=-1.0)
    assert traj.completion_time == 1.0
