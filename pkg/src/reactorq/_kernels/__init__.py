"""Stage-simulation kernel backend selection.

Prefers the compiled Cython extension; falls back to the pure-Python mirror
when the extension is unavailable or ``REACTORQ_PURE_PYTHON=1`` is set.
Both backends implement the same contract and the same arithmetic.
"""

import os

if os.environ.get("REACTORQ_PURE_PYTHON") == "1":
    from reactorq._kernels._pyfallback import (
        BACKEND, MODEL_BATCH_AB, MODEL_FED_BATCH, MODEL_SEMI_BATCH,
        simulate_stage_raw)
else:
    try:
        from reactorq._kernels._speedups import BACKEND, simulate_stage_raw
        from reactorq._kernels._pyfallback import (
            MODEL_BATCH_AB, MODEL_FED_BATCH, MODEL_SEMI_BATCH)
    except ImportError:
        from reactorq._kernels._pyfallback import (
            BACKEND, MODEL_BATCH_AB, MODEL_FED_BATCH, MODEL_SEMI_BATCH,
            simulate_stage_raw)

__all__ = [
    "BACKEND",
    "MODEL_BATCH_AB",
    "MODEL_FED_BATCH",
    "MODEL_SEMI_BATCH",
    "simulate_stage_raw",
]
