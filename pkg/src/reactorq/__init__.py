"""reactorq: fitted Q-iteration optimal control for batch reactor models.

The package learns state-feedback operating policies for three benchmark
reactors (batch A->B->C, fed-batch A+B->C / 2B->D, and a minimum-time
semi-batch A+B->C with a safety-capped B concentration) from simulated
transitions, and compares them against iterative dynamic programming and
direct control-vector search baselines, including under actuator-failure
scenarios.
"""

from reactorq._kernels import BACKEND
from reactorq.models import make_model

__version__ = "0.1.0"

__all__ = ["BACKEND", "make_model", "__version__"]
