"""Backend contract tests: compiled and pure-Python kernels must agree."""

import math

import numpy as np
import pytest

from reactorq._kernels import _pyfallback
from reactorq.integrate import rk4_step
from reactorq.models import make_model

try:
    from reactorq._kernels import _speedups
except ImportError:
    _speedups = None

MODELS = ("batch_ab", "fed_batch", "semi_batch")


def _random_inputs(model, rng, n):
    region = model.default_init_region()
    lo, hi = model.action_bounds
    states = [model.sample_initial_state(rng, region) for _ in range(n)]
    actions = rng.uniform(lo, hi, size=n)
    return states, actions


@pytest.mark.skipif(_speedups is None, reason="compiled extension not built")
@pytest.mark.parametrize("name", MODELS)
def test_backends_bitwise_equal(name):
    model = make_model(name)
    rng = np.random.default_rng(7)
    states, actions = _random_inputs(model, rng, 50)
    dt = model.stage_duration / 20
    for state, u in zip(states, actions):
        py = _pyfallback.simulate_stage_raw(model.kernel_id,
                                            model.kernel_params, state,
                                            float(u), dt, 20)
        cy = _speedups.simulate_stage_raw(model.kernel_id,
                                          model.kernel_params, state,
                                          float(u), dt, 20)
        assert np.array_equal(py[0], cy[0])
        assert py[1] == cy[1]
        assert np.array_equal(py[2], cy[2])


# concentration components floored at zero per model (volume never clamped)
CLAMP_DIMS = {"batch_ab": 2, "fed_batch": 4, "semi_batch": 2}


@pytest.mark.parametrize("name", MODELS)
def test_kernel_single_substep_matches_rk4(name):
    """One kernel substep == one numpy rk4_step with the model derivatives."""
    model = make_model(name)
    rng = np.random.default_rng(3)
    states, actions = _random_inputs(model, rng, 20)
    dt = model.stage_duration / 20
    for state, u in zip(states, actions):
        expected = rk4_step(state, float(u), dt, model.derivs)
        expected[:CLAMP_DIMS[name]] = np.maximum(
            expected[:CLAMP_DIMS[name]], 0.0)
        got, _, _ = _pyfallback.simulate_stage_raw(
            model.kernel_id, model.kernel_params, state, float(u), dt, 1)
        assert np.allclose(got, expected, rtol=1e-13, atol=1e-15)


def test_batch_ab_derivative_hand_value():
    """Fresh charge at the hottest temperature: dx1 = -dx2 = -k_a e^(-E/T)."""
    model = make_model("batch_ab")
    rate = 4000.0 * math.exp(-2500.0 / 398.0)
    dx = model.derivs(np.array([1.0, 0.0]), 398.0)
    assert dx[0] == pytest.approx(-rate, rel=1e-14)
    assert dx[1] == pytest.approx(rate, rel=1e-14)
    assert rate == pytest.approx(7.4831, abs=2e-4)  # independent spot value


def test_clamp_floors_negative_concentrations():
    """An overshooting substep gets floored at zero and counted."""
    model = make_model("batch_ab")
    state = np.array([1.0, 0.0])
    # a huge substep makes RK4 overshoot the quadratic x1 decay below zero
    out, clamp_count, comp_max = _pyfallback.simulate_stage_raw(
        model.kernel_id, model.kernel_params, state, 398.0, 1.0, 5)
    assert out[0] >= 0.0
    assert clamp_count >= 1
    assert np.all(comp_max >= out)
    assert np.all(comp_max >= state)


def test_comp_max_tracks_running_peak():
    model = make_model("semi_batch")
    state = model.initial_state()
    dt = model.stage_duration / 20
    running = state.copy()
    s = state.copy()
    for _ in range(20):
        s, _, _ = _pyfallback.simulate_stage_raw(
            model.kernel_id, model.kernel_params, s, 0.08, dt, 1)
        running = np.maximum(running, s)
    _, _, comp_max = _pyfallback.simulate_stage_raw(
        model.kernel_id, model.kernel_params, state, 0.08, dt, 20)
    assert np.allclose(comp_max, running, rtol=0, atol=0)


def test_nonfinite_state_raises():
    model = make_model("batch_ab")
    with pytest.raises(FloatingPointError):
        _pyfallback.simulate_stage_raw(
            model.kernel_id, (1e308, 0.0, 1e308, 0.0),
            np.array([1e200, 0.0]), 398.0, 1.0, 1)


def test_unknown_model_id_rejected():
    with pytest.raises((ValueError, KeyError)):
        _pyfallback.simulate_stage_raw(99, (1.0,), np.array([1.0]), 0.0,
                                       0.1, 1)
