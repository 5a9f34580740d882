"""Deterministic distributed dominating-set approximation toolkit.

A library plus CLI implementing derandomized rounding of fractional
dominating sets (color-ordered and cluster-ordered conditional
expectations), the supporting CONGEST-style round/message accounting, and a
connected-dominating-set extension, with exact rational arithmetic on every
invariant-bearing path.
"""

from .errors import (
    CongestDSError,
    DomainError,
    EnumerationBudgetError,
    InvariantViolation,
    MessageSizeError,
    PrecisionError,
    PreconditionError,
    RoundBudgetError,
    StructuralError,
)
from .graph import Graph, format_graph, load_graph, parse_graph
from .values import (
    CFDS,
    FixedPoint,
    fractionality,
    quantize_up,
    validate_cfds,
)
from .pipeline import PipelineParams, RunReport, run_cds, run_mds_delta, run_mds_n
from .oracles import brute_force_cds, brute_force_mds
from .generators import generate_graph

__version__ = "1.0.0"

__all__ = [
    "CFDS",
    "CongestDSError",
    "DomainError",
    "EnumerationBudgetError",
    "FixedPoint",
    "Graph",
    "InvariantViolation",
    "MessageSizeError",
    "PipelineParams",
    "PrecisionError",
    "PreconditionError",
    "RoundBudgetError",
    "RunReport",
    "StructuralError",
    "brute_force_cds",
    "brute_force_mds",
    "format_graph",
    "fractionality",
    "generate_graph",
    "load_graph",
    "parse_graph",
    "quantize_up",
    "run_cds",
    "run_mds_delta",
    "run_mds_n",
    "validate_cfds",
]
