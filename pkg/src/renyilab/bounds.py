"""Verifiers for the min-entropy comparison ``H_a - H_inf < log a**(1/(a-1))``.

Covers log-concave pmfs, two-sided geometric laws (closed form), the scalar
inequality behind strict monotonicity of the auxiliary function ``F`` and
the approach to the sharp constant along geometric laws.
"""

from __future__ import annotations

import math
from typing import Sequence

from .core import BoundReport, NotLogConcaveError, OrderKind, Order, Pmf, TwoSidedGeo, is_log_concave
from .entropy import geometric_gap, log_c, renyi, renyi_two_sided_geo

TOL = 1e-12


def _order(a) -> Order:
    order = Order.parse(a)
    if order.kind is OrderKind.ZERO:
        raise ValueError("order 0 is excluded: the comparison constant is infinite")
    return order


def check_main_theorem(f: Pmf, a) -> BoundReport:
    """``H_a(f) - H_inf(f) < log c(a)`` for a log-concave pmf ``f``."""
    order = _order(a)
    if not is_log_concave(f):
        raise NotLogConcaveError("the min-entropy comparison needs a log-concave pmf")
    lhs = renyi(f, order).value - renyi(f, math.inf).value
    return BoundReport(lhs, log_c(order), {"pmf": f.to_dict(), "order": str(order)}, tol=TOL)


def check_tsg_lemma(g: TwoSidedGeo, a) -> BoundReport:
    """Closed-form ``H_a(g) - H_inf(g) < log c(a)`` for a two-sided geometric."""
    order = _order(a)
    lhs = renyi_two_sided_geo(g, order).value - renyi_two_sided_geo(g, math.inf).value
    return BoundReport(lhs, log_c(order),
                       {"p": g.p, "q": g.q, "m": g.m, "order": str(order)}, tol=TOL)


def half_function(x: float) -> float:
    """``x log x / (1-x)**2 + 1/(1-x)``, strictly decreasing from 1 to 1/2 on (0, 1).

    Near ``x = 1`` the expression cancels catastrophically, so with
    ``e = 1 - x`` the series ``sum_{k>=2} e**(k-2) / (k (k-1))`` is used
    instead (all terms positive).
    """
    if not (0.0 < x < 1.0):
        raise ValueError(f"x must lie in (0, 1), got {x!r}")
    e = 1.0 - x
    if e > 0.25:
        return x * math.log(x) / e ** 2 + 1.0 / e
    total = 0.0
    term = 1.0
    k = 2
    while True:
        piece = term / (k * (k - 1))
        total += piece
        if piece < 1e-18 * total:
            return total
        term *= e
        k += 1


def scalar_inequality(x: float, y: float) -> BoundReport:
    """``x log x/(1-x)**2 + y log y/(1-y)**2 + 1/(1-x) + 1/(1-y) > 1``.

    Reported as ``lhs = 1 <= rhs = value``, so ``margin = value - 1``.
    """
    fx = half_function(x)
    fy = half_function(y)
    return BoundReport(1.0, fx + fy, {"x": x, "y": y}, tol=0.0,
                       holds=fx + fy > 1.0,
                       extra={"f(x)": fx, "f(y)": fy,
                              "halves_hold": fx > 0.5 and fy > 0.5})


def F_aux(p: float, q: float, alpha: float) -> float:
    """``F(a) = a (1/(1-p**a) + 1/(1-q**a) - 1)``."""
    return alpha * (_inv_one_minus_pow(p, alpha) + _inv_one_minus_pow(q, alpha) - 1.0)


def F_aux_derivative(p: float, q: float, alpha: float) -> float:
    total = _inv_one_minus_pow(p, alpha) + _inv_one_minus_pow(q, alpha) - 1.0
    for r in (p, q):
        if r > 0:
            # log x kept separately so an underflowing x = r**alpha contributes 0
            log_x = alpha * math.log(r)
            total += math.exp(log_x) * log_x / math.expm1(log_x) ** 2
    return total


def _inv_one_minus_pow(r: float, alpha: float) -> float:
    if r == 0.0:
        return 1.0
    return 1.0 / -math.expm1(alpha * math.log(r))


def F_increasing_check(p: float, q: float, a_grid: Sequence[float],
                       rel_tol: float = 1e-6) -> BoundReport:
    """Strict increase of ``F`` along ``a_grid`` plus the derivative formula.

    ``F'`` is compared against a central difference at every grid point.
    The report has ``lhs = 0`` and ``rhs`` the smallest increment of ``F``
    between consecutive grid points.
    """
    if not (0.0 <= p < 1.0 and 0.0 <= q < 1.0):
        raise ValueError("p and q must lie in [0, 1)")
    grid = [float(a) for a in a_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])) or any(a <= 0 for a in grid):
        raise ValueError("grid must be positive and strictly increasing")
    values = [F_aux(p, q, a) for a in grid]
    increments = [b - a for a, b in zip(values, values[1:])]
    min_increment = min(increments) if increments else math.inf
    worst = 0.0
    for a in grid:
        h = 1e-4 * a
        fd = (F_aux(p, q, a + h) - F_aux(p, q, a - h)) / (2 * h)
        exact = F_aux_derivative(p, q, a)
        worst = max(worst, abs(fd - exact) / max(abs(exact), 1e-300))
    return BoundReport(0.0, min_increment, {"p": p, "q": q, "grid": grid}, tol=0.0,
                       holds=min_increment > 0 and worst <= rel_tol,
                       extra={"values": values, "derivative_rel_error": worst})


def sharpness_scan(a, theta_grid: Sequence[float]) -> list[BoundReport]:
    """``H_a - H_inf`` of ``Geometric(theta)`` against ``log c(a)`` along a grid."""
    order = _order(a)
    rhs = log_c(order)
    reports = []
    for theta in theta_grid:
        if not (0.0 < theta < 1.0):
            raise ValueError(f"theta must lie in (0, 1), got {theta!r}")
        reports.append(BoundReport(geometric_gap(theta, order), rhs,
                                   {"theta": theta, "order": str(order)}, tol=TOL))
    return reports


def approaches_monotonically(reports: Sequence[BoundReport]) -> bool:
    """Margins shrink as theta decreases (reports in any theta order)."""
    ordered = sorted(reports, key=lambda r: r.witness["theta"])
    margins = [r.margin for r in ordered]
    return all(a <= b for a, b in zip(margins, margins[1:]))
