"""Rate-distortion functions by alternating Sinkhorn, with a Blahut-Arimoto baseline."""

import json

from ._commot import (
    DomainError,
    InvalidProblem,
    NumericalError,
    Problem,
    ResidualRecord,
    TargetUnreachable,
    analytic_rd_binary,
    analytic_rd_gaussian,
    analytic_rd_laplacian,
    ba_fixed_slope,
    ba_search,
    curve,
    linear_segments,
    solve,
)
from ._commot import compare as _compare


def compare(repeats=1):
    """AS against slope-searched BA on the benchmark cases."""
    return json.loads(_compare(repeats))


__all__ = [
    "DomainError",
    "InvalidProblem",
    "NumericalError",
    "Problem",
    "ResidualRecord",
    "TargetUnreachable",
    "analytic_rd_binary",
    "analytic_rd_gaussian",
    "analytic_rd_laplacian",
    "ba_fixed_slope",
    "ba_search",
    "compare",
    "curve",
    "linear_segments",
    "solve",
]
