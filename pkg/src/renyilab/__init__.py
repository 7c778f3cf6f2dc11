"""Renyi entropy comparisons for log-concave distributions on the integers."""

from .core import (
    INF,
    ONE,
    TWO,
    ZERO,
    BoundReport,
    Geometric,
    MajorizationError,
    NotLogConcaveError,
    Order,
    OrderKind,
    Pmf,
    TwoSidedGeo,
    decreasing_rearrangement,
    geometric,
    is_log_concave,
    is_monotone,
    random_log_concave,
)
from .entropy import EntropyValue, Method, c, continuous_reference, log_c, renyi, renyi_two_sided_geo

__version__ = "0.1.0"
