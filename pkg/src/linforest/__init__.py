"""Linear forests: exact linear arboricity, robust expansion and constructive decompositions."""

from .decompose import PipelineParams, decompose, la_exact, la_regular_expander
from .graph import (
    LinearForest,
    LinearForestDecomposition,
    MultiGraph,
    DiGraph,
    SimpleGraph,
    conjecture_bound,
    validate_decomposition,
)

__version__ = "0.1.0"

__all__ = [
    "DiGraph",
    "LinearForest",
    "LinearForestDecomposition",
    "MultiGraph",
    "PipelineParams",
    "SimpleGraph",
    "conjecture_bound",
    "decompose",
    "la_exact",
    "la_regular_expander",
    "validate_decomposition",
]
