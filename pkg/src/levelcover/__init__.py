"""Dynamic approximately-minimum capacitated vertex/set cover.

Maintains a hierarchical level scheme over a changing graph, extracts
primal covers with dual lower-bound certificates, and ships the brute-force
oracles and potential-function instrumentation used to verify the
approximation and amortized-cost guarantees at desk scale.
"""

from .core import (
    BACKEND,
    GraphState,
    Mode,
    Parameters,
    VertexAttrs,
    add_vertex,
    new_instance,
    theoretical_ratio,
)
from .dynamic import UpdateReport, delete_edge, fix, insert_edge

__all__ = [
    "BACKEND",
    "GraphState",
    "Mode",
    "Parameters",
    "VertexAttrs",
    "add_vertex",
    "new_instance",
    "theoretical_ratio",
    "UpdateReport",
    "insert_edge",
    "delete_edge",
    "fix",
]

__version__ = "0.1.0"
