"""Benchmark the compiled stage integrator against the pure-Python fallback.

Runs the same batch of stage integrations through both backends and reports
wall time per call plus the observed speedup. Usage:

    python benchmarks/bench_kernels.py [--calls 20000]
"""

import argparse
import time

import numpy as np

from reactorq._kernels import _pyfallback
from reactorq.models import make_model

try:
    from reactorq._kernels import _speedups
except ImportError:
    _speedups = None


def bench(kernel, model, states, actions, dt, n_sub):
    start = time.perf_counter()
    for state, u in zip(states, actions):
        kernel.simulate_stage_raw(model.kernel_id, model.kernel_params,
                                  state, u, dt, n_sub)
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--calls", type=int, default=20000,
                        help="stage integrations per backend per model")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'model':<12} {'backend':<8} {'us/call':>10} {'speedup':>8}")
    for name in ("batch_ab", "fed_batch", "semi_batch"):
        model = make_model(name)
        low, high = model.action_bounds
        region = model.default_init_region()
        states = [model.sample_initial_state(rng, region)
                  for _ in range(args.calls)]
        actions = rng.uniform(low, high, size=args.calls)
        dt = model.stage_duration

        t_py = bench(_pyfallback, model, states, actions, dt, 20)
        print(f"{name:<12} {'python':<8} {1e6 * t_py / args.calls:>10.2f} "
              f"{'1.00x':>8}")
        if _speedups is None:
            print(f"{name:<12} {'cython':<8} {'(extension not built)':>10}")
            continue
        t_cy = bench(_speedups, model, states, actions, dt, 20)
        print(f"{name:<12} {'cython':<8} {1e6 * t_cy / args.calls:>10.2f} "
              f"{t_py / t_cy:>7.2f}x")

        # both backends must agree bit-for-bit on a spot check
        s, u = states[0], actions[0]
        a = _pyfallback.simulate_stage_raw(model.kernel_id,
                                           model.kernel_params, s, u, dt, 20)
        b = _speedups.simulate_stage_raw(model.kernel_id,
                                         model.kernel_params, s, u, dt, 20)
        assert np.array_equal(a[0], b[0]), f"backend mismatch on {name}"


if __name__ == "__main__":
    main()
