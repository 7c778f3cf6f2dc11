"""Law of ``X - Y`` for iid integer variables and Renyi Rogers-Shephard checks."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .core import (
    BoundReport,
    Geometric,
    NotLogConcaveError,
    Order,
    OrderKind,
    Pmf,
    is_log_concave,
    truncation_tol,
)
from .entropy import log_c, renyi

TOL = 1e-12
IDENTITY_TOL = 1e-12
# Direct checks in the limit scan are skipped beyond this truncated support.
MAX_DIRECT_SUPPORT = 4000

DiffPmf = Pmf


def difference(f: Pmf) -> DiffPmf:
    """Exact pmf of ``X - Y`` for ``X, Y`` iid with law ``f``.

    ``mass(k) = sum_i f(i + k) f(i)``, summed with compensation, lag by lag.
    Only lags ``k >= 0`` are computed; the negative side is their mirror, so
    the result is exactly symmetric.
    """
    p = f.probs
    n = p.size
    half = np.array([math.fsum(p[k:] * p[:n - k]) for k in range(n)])
    return Pmf(-(n - 1), np.concatenate([half[:0:-1], half]))


def rs_log_constant(a) -> float:
    """``log c(a)`` with ``c(a) = 2 a**(1/(a-1))`` on ``(2, inf]`` and ``a**(1/(a-1))`` on ``(0, 2]``."""
    order = Order.parse(a)
    if order.kind is OrderKind.ZERO:
        raise ValueError("order 0 is handled by check_h0_rs")
    base = log_c(order)
    if order.alpha > 2.0:
        return math.log(2.0) + base
    return base


def check_discrete_rs(f: Pmf, a) -> BoundReport:
    """``H_a(X - Y) - H_a(X) < log c(a)`` for iid log-concave ``X, Y``."""
    order = Order.parse(a)
    if order.kind is OrderKind.ZERO:
        raise ValueError("order 0 is handled by check_h0_rs")
    if not is_log_concave(f):
        raise NotLogConcaveError("the Rogers-Shephard comparison needs a log-concave pmf")
    d = difference(f)
    lhs = renyi(d, order).value - renyi(f, order).value
    return BoundReport(lhs, rs_log_constant(order), {"pmf": f.to_dict(), "order": str(order)},
                       tol=TOL)


def check_h0_rs(f: Pmf) -> BoundReport:
    """``H_0(X - Y) < H_0(X) + log 2``: the difference has ``2n - 1`` support points."""
    n = len(f)
    lhs = math.log(2 * n - 1)
    rhs = math.log(n) + math.log(2.0)
    return BoundReport(lhs, rhs, {"support_size": n, "order": "0"}, tol=0.0,
                       holds=lhs < rhs)


def identity_inf_two(f: Pmf) -> BoundReport:
    """``H_inf(X - Y) = H_2(X)``.

    The difference law peaks at 0 with mass ``sum p_i**2`` (Cauchy-Schwarz),
    so the identity holds for every pmf, log-concave or not.
    """
    lhs = renyi(difference(f), math.inf).value
    rhs = renyi(f, 2.0).value
    gap = abs(lhs - rhs)
    return BoundReport(lhs, rhs, {"pmf": f.to_dict()}, tol=IDENTITY_TOL,
                       holds=gap <= IDENTITY_TOL, extra={"abs_gap": gap})


def geometric_rs_gap(theta: float, a) -> float:
    """Closed form of ``H_a(X - Y) - H_a(X)`` for iid ``Geometric(theta)``.

    For finite ``a != 1`` this is ``log[(1 + (1-theta)**a) / (2-theta)**a] / (1-a)``;
    the Shannon and min-entropy cases are the corresponding limits.
    """
    order = Order.parse(a)
    if not (0.0 < theta <= 1.0):
        raise ValueError(f"theta must lie in (0, 1], got {theta!r}")
    if theta == 1.0:
        return 0.0
    kind = order.kind
    if kind is OrderKind.ZERO:
        raise ValueError("both order-0 entropies are infinite")
    log_r = math.log1p(-theta)
    if kind is OrderKind.INFINITY:
        return math.log(2.0 - theta)
    if kind is OrderKind.ONE:
        r = 1.0 - theta
        # X - Y has mass c r^|k| with c = theta / (2 - theta)
        h_diff = -math.log(theta / (2.0 - theta)) - log_r * 2.0 * r / ((2.0 - theta) * theta)
        h_x = -(r * log_r + theta * math.log(theta)) / theta
        return h_diff - h_x
    alpha = order.alpha
    r_alpha = math.exp(alpha * log_r)
    return (math.log1p(r_alpha) - alpha * math.log(2.0 - theta)) / (1.0 - alpha)


def rs_limit_scan(a, theta_grid: Sequence[float]) -> list[BoundReport]:
    """Closed form along geometric laws, cross-checked by direct computation.

    Each report has ``lhs`` the closed-form gap and ``rhs = log 2``.  When the
    truncated support (see :func:`truncation_tol`) has at most
    ``MAX_DIRECT_SUPPORT`` points the gap is also computed from the truncated
    pmf and stored as ``extra["direct"]``.
    """
    order = Order.parse(a)
    reports = []
    for theta in theta_grid:
        if not (0.0 < theta < 1.0):
            raise ValueError(f"theta must lie in (0, 1), got {theta!r}")
        closed = geometric_rs_gap(theta, order)
        extra = {}
        geo = Geometric(theta)
        tol = truncation_tol(order.alpha)
        if geo.truncation_length(tol) <= MAX_DIRECT_SUPPORT:
            f = geo.to_pmf(tol)
            direct = renyi(difference(f), order).value - renyi(f, order).value
            extra = {"direct": direct, "abs_diff": abs(direct - closed)}
        reports.append(BoundReport(closed, math.log(2.0),
                                   {"theta": theta, "order": str(order)}, tol=TOL, extra=extra))
    return reports
