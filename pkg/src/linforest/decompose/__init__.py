"""Linear-forest decomposition routes, the exact oracle and the dispatcher."""

from .cases import classify, complete_low_vertices, theorem31_decompose
from .common import PipelineParams, PipelineTrace, RouteFailure
from .loop import LoopState, initial_state, loop_guard, recompute_state, theorem14_reduction
from .oracle import OracleBudgetExceeded, greedy_linear_forests, la_exact
from .pipeline import STRATEGIES, decompose
from .reduction import DeficiencyPlan, deficiencies, plan_deficiencies, reduce_to_regular
from .regular import la_regular_expander

__all__ = [
    "DeficiencyPlan",
    "LoopState",
    "OracleBudgetExceeded",
    "PipelineParams",
    "PipelineTrace",
    "RouteFailure",
    "STRATEGIES",
    "classify",
    "complete_low_vertices",
    "decompose",
    "deficiencies",
    "greedy_linear_forests",
    "initial_state",
    "la_exact",
    "la_regular_expander",
    "loop_guard",
    "plan_deficiencies",
    "recompute_state",
    "reduce_to_regular",
    "theorem14_reduction",
    "theorem31_decompose",
]
