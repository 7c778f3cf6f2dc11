"""Renyi entropies (in nats) of pmfs, two-sided geometrics and references."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import Geometric, Order, OrderKind, Pmf, TwoSidedGeo

# Between ORDER_ONE_SNAP and this distance from 1 the direct formula is too
# ill-conditioned and the Shannon value is returned instead.
NEAR_ONE = 1e-6
_UNDERFLOW = 1e-300


class Method(Enum):
    DIRECT_SUM = "direct-sum"
    CLOSED_FORM = "closed-form"
    LIMIT_FORMULA = "limit-formula"


@dataclass(frozen=True)
class EntropyValue:
    order: Order
    value: float
    method: Method

    def __float__(self) -> float:
        return self.value


def _as_order(a) -> Order:
    return Order.parse(a)


def _near_one(order: Order) -> bool:
    return order.kind is OrderKind.FINITE and abs(order.alpha - 1.0) <= NEAR_ONE


def shannon(probs: np.ndarray) -> float:
    return -math.fsum(probs * np.log(probs))


def log_power_sum(probs: np.ndarray, alpha: float) -> float:
    """``log(sum(p**alpha))``, switching to log-space when terms would underflow."""
    if probs.min() < _UNDERFLOW ** (1.0 / alpha):
        logs = alpha * np.log(probs)
        top = logs.max()
        return top + math.log(math.fsum(np.exp(logs - top)))
    return math.log(math.fsum(probs ** alpha))


def renyi(f: Pmf, a) -> EntropyValue:
    """Renyi entropy of order ``a`` of a finitely supported pmf."""
    order = _as_order(a)
    p = f.probs
    kind = order.kind
    if kind is OrderKind.ZERO:
        return EntropyValue(order, math.log(p.size), Method.DIRECT_SUM)
    if kind is OrderKind.ONE:
        return EntropyValue(order, shannon(p), Method.DIRECT_SUM)
    if kind is OrderKind.INFINITY:
        return EntropyValue(order, -math.log(p.max()), Method.DIRECT_SUM)
    alpha = order.alpha
    if _near_one(order):
        return EntropyValue(order, shannon(p), Method.LIMIT_FORMULA)
    value = log_power_sum(p, alpha) / (1.0 - alpha)
    return EntropyValue(order, max(value, 0.0), Method.DIRECT_SUM)


def _xlogx_over(r: float) -> float:
    """``r log r / (1 - r)**2`` with ``0 log 0 = 0``."""
    if r == 0.0:
        return 0.0
    return r * math.log(r) / (1.0 - r) ** 2


def _geo_series(r: float, alpha: float) -> float:
    """``1 / (1 - r**alpha)``."""
    if r == 0.0:
        return 1.0
    return 1.0 / -math.expm1(alpha * math.log(r))


def tsg_gap(p: float, q: float, a) -> float:
    """``H_a - H_inf`` of a two-sided geometric with ratios ``p`` and ``q``.

    The gap depends only on the ratios, not on the mode or its mass.
    """
    order = _as_order(a)
    kind = order.kind
    if kind is OrderKind.INFINITY or (p == 0.0 and q == 0.0):
        return 0.0
    if kind is OrderKind.ZERO:
        return math.inf
    s1 = 1.0 / (1.0 - p) + 1.0 / (1.0 - q) - 1.0
    if kind is OrderKind.ONE or _near_one(order):
        return -(_xlogx_over(p) + _xlogx_over(q)) / s1
    alpha = order.alpha
    s_alpha = _geo_series(p, alpha) + _geo_series(q, alpha) - 1.0
    return math.log(s_alpha / s1) / (1.0 - alpha)


def renyi_two_sided_geo(g: TwoSidedGeo, a) -> EntropyValue:
    """Closed-form Renyi entropy of a two-sided geometric law."""
    order = _as_order(a)
    method = Method.LIMIT_FORMULA if _near_one(order) else Method.CLOSED_FORM
    if order.kind is OrderKind.ZERO:
        value = 0.0 if g.is_point_mass else math.inf
        return EntropyValue(order, value, method)
    value = -math.log(g.mode_mass) + tsg_gap(g.p, g.q, order)
    return EntropyValue(order, max(value, 0.0), method)


def renyi_geometric(g: Geometric, a) -> EntropyValue:
    """Closed-form Renyi entropy of ``Geometric(theta)``, accurate for tiny theta."""
    order = _as_order(a)
    theta = g.theta
    method = Method.LIMIT_FORMULA if _near_one(order) else Method.CLOSED_FORM
    if theta == 1.0:
        return EntropyValue(order, 0.0, method)
    kind = order.kind
    if kind is OrderKind.ZERO:
        return EntropyValue(order, math.inf, method)
    if kind is OrderKind.INFINITY:
        return EntropyValue(order, -math.log(theta), method)
    log_r = math.log1p(-theta)
    if kind is OrderKind.ONE or _near_one(order):
        value = -((1.0 - theta) * log_r + theta * math.log(theta)) / theta
        return EntropyValue(order, value, method)
    alpha = order.alpha
    value = (alpha * math.log(theta) - math.log(-math.expm1(alpha * log_r))) / (1.0 - alpha)
    return EntropyValue(order, value, method)


def geometric_gap(theta: float, a) -> float:
    """``H_a - H_inf`` of ``Geometric(theta)``.

    Written as ``(log theta - log(1 - (1 - theta)**a)) / (1 - a)`` so small
    ``theta`` keeps full relative precision.
    """
    order = _as_order(a)
    if theta == 1.0 or order.kind is OrderKind.INFINITY:
        return 0.0
    if order.kind is OrderKind.ZERO:
        return math.inf
    log_r = math.log1p(-theta)
    if order.kind is OrderKind.ONE or _near_one(order):
        return -(1.0 - theta) * log_r / theta
    alpha = order.alpha
    return (math.log(theta) - math.log(-math.expm1(alpha * log_r))) / (1.0 - alpha)


def log_c(a) -> float:
    """``log c(a) = log(a) / (a - 1)``; 1 at ``a = 1``, 0 at infinity, inf at 0."""
    order = _as_order(a)
    kind = order.kind
    if kind is OrderKind.ZERO:
        return math.inf
    if kind is OrderKind.ONE:
        return 1.0
    if kind is OrderKind.INFINITY:
        return 0.0
    alpha = order.alpha
    return math.log1p(alpha - 1.0) / (alpha - 1.0) if alpha < 2.0 else math.log(alpha) / (alpha - 1.0)


def c(a) -> float:
    """``c(a) = a**(1/(a-1))`` with ``c(inf) = 1``, ``c(1) = e``, ``c(0) = inf``."""
    order = _as_order(a)
    kind = order.kind
    if kind is OrderKind.ZERO:
        return math.inf
    if kind is OrderKind.ONE:
        return math.e
    if kind is OrderKind.INFINITY:
        return 1.0
    if kind is OrderKind.TWO:
        return 2.0
    return math.exp(log_c(order))


def continuous_reference(dist: str, a) -> float:
    """Renyi entropy of the unit exponential or the standard Laplace density."""
    order = _as_order(a)
    if order.kind is OrderKind.ZERO:
        raise ValueError("order 0 entropy is infinite for exponential and Laplace laws")
    if dist == "exponential":
        return log_c(order)
    if dist == "laplace":
        return math.log(2.0) + log_c(order)
    raise ValueError(f"unknown reference distribution {dist!r}")
