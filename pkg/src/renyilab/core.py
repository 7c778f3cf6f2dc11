"""Integer-supported distributions, Renyi orders and structural predicates.

A :class:`Pmf` stores a strictly positive weight vector together with the
integer location of its first entry, so the support is always a contiguous
integer interval.  Everything here is immutable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

SUM_TOL = 1e-12
LOG_CONCAVE_RTOL = 1e-12
# Orders this close to 1 are indistinguishable from Shannon.
ORDER_ONE_SNAP = 1e-9


class OrderKind(Enum):
    ZERO = "zero"
    ONE = "one"
    TWO = "two"
    INFINITY = "infinity"
    FINITE = "finite"


@dataclass(frozen=True, order=True)
class Order:
    """A Renyi order in ``[0, inf]``.

    ``Order(1 + 1e-10)`` snaps to the Shannon order.  Orders are ordered by
    their numeric value, with ``Order(inf)`` the largest.
    """

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if math.isnan(a) or a < 0:
            raise ValueError(f"Renyi order must lie in [0, inf], got {self.alpha!r}")
        if abs(a - 1.0) <= ORDER_ONE_SNAP:
            a = 1.0
        object.__setattr__(self, "alpha", a)

    @property
    def kind(self) -> OrderKind:
        a = self.alpha
        if a == 0.0:
            return OrderKind.ZERO
        if a == 1.0:
            return OrderKind.ONE
        if a == 2.0:
            return OrderKind.TWO
        if math.isinf(a):
            return OrderKind.INFINITY
        return OrderKind.FINITE

    @classmethod
    def parse(cls, spec: str | float | "Order") -> "Order":
        """Parse ``"inf"``, ``"0"``, ``"1"`` or a positive decimal."""
        if isinstance(spec, Order):
            return spec
        if isinstance(spec, (int, float)):
            return cls(float(spec))
        text = str(spec).strip().lower()
        if text in ("inf", "infinity", "oo", "+inf"):
            return cls(math.inf)
        try:
            value = float(text)
        except ValueError:
            raise ValueError(f"invalid order spec {spec!r}") from None
        if math.isnan(value):
            raise ValueError(f"invalid order spec {spec!r}")
        return cls(value)

    def __str__(self) -> str:
        if math.isinf(self.alpha):
            return "inf"
        return f"{self.alpha:g}"


ZERO = Order(0.0)
ONE = Order(1.0)
TWO = Order(2.0)
INF = Order(math.inf)


@dataclass(frozen=True, eq=False)
class Pmf:
    """Finitely supported probability mass function on the integers.

    ``probs[i]`` is the mass at ``offset + i``.  Weights must be strictly
    positive and sum to one within ``SUM_TOL``.
    """

    offset: int
    probs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.probs, dtype=np.float64).reshape(-1)
        if arr.size == 0:
            raise ValueError("a pmf needs at least one support point")
        if not np.all(np.isfinite(arr)):
            raise ValueError("pmf weights must be finite")
        if np.any(arr <= 0):
            raise ValueError("pmf weights must be strictly positive")
        total = math.fsum(arr)
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"pmf weights sum to {total!r}, not 1")
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)
        object.__setattr__(self, "offset", int(self.offset))

    @classmethod
    def from_weights(cls, weights: Iterable[float], offset: int = 0) -> "Pmf":
        w = np.asarray(list(weights) if not isinstance(weights, np.ndarray) else weights,
                       dtype=np.float64)
        if np.any(w <= 0):
            raise ValueError("pmf weights must be strictly positive")
        return cls(offset, w / math.fsum(w))

    @classmethod
    def point(cls, at: int = 0) -> "Pmf":
        return cls(at, [1.0])

    @classmethod
    def uniform(cls, n: int, offset: int = 0) -> "Pmf":
        if n < 1:
            raise ValueError("uniform pmf needs n >= 1")
        return cls(offset, np.full(n, 1.0 / n))

    def __len__(self) -> int:
        return self.probs.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pmf):
            return NotImplemented
        return self.offset == other.offset and np.array_equal(self.probs, other.probs)

    def __hash__(self):
        return hash((self.offset, self.probs.tobytes()))

    def __repr__(self) -> str:
        return f"Pmf(offset={self.offset}, probs={self.probs.tolist()!r})"

    @property
    def support(self) -> range:
        return range(self.offset, self.offset + len(self))

    def mass(self, k: int) -> float:
        i = k - self.offset
        if 0 <= i < len(self):
            return float(self.probs[i])
        return 0.0

    @property
    def max_mass(self) -> float:
        return float(self.probs.max())

    @property
    def argmax_index(self) -> int:
        """Leftmost index (into ``probs``) of the maximal weight."""
        return int(np.argmax(self.probs))

    def mirror(self) -> "Pmf":
        """Distribution of ``-X``."""
        return Pmf(-(self.offset + len(self) - 1), self.probs[::-1].copy())

    def to_dict(self) -> dict:
        return {"offset": self.offset, "probs": self.probs.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Pmf":
        if not isinstance(data, dict) or "probs" not in data:
            raise ValueError('pmf JSON must be an object with a "probs" list')
        offset = data.get("offset", 0)
        if isinstance(offset, bool) or not isinstance(offset, int):
            raise ValueError('"offset" must be an integer')
        probs = data["probs"]
        if not isinstance(probs, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in probs
        ):
            raise ValueError('"probs" must be a list of numbers')
        return cls(offset, probs)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Pmf":
        return cls.from_dict(json.loads(text))


def is_log_concave(f: Pmf, rel_tol: float = LOG_CONCAVE_RTOL) -> bool:
    """Check ``p[i]**2 >= p[i-1] * p[i+1] * (1 - rel_tol)`` at interior points.

    Contiguity of the support is guaranteed by :class:`Pmf` itself.
    """
    p = f.probs
    if p.size < 3:
        return True
    return bool(np.all(p[1:-1] ** 2 >= p[:-2] * p[2:] * (1.0 - rel_tol)))


def is_monotone(f: Pmf) -> bool:
    d = np.diff(f.probs)
    return bool(np.all(d <= 0) or np.all(d >= 0))


def decreasing_rearrangement(f: Pmf | Sequence[float]) -> np.ndarray:
    """Weights sorted in descending order; ties keep their original order."""
    p = f.probs if isinstance(f, Pmf) else np.asarray(f, dtype=np.float64)
    order = np.argsort(-p, kind="stable")
    return p[order]


# Keep log-weights above this floor so squares and pairwise products of
# probabilities stay well clear of underflow.
_LOG_RANGE = 100.0
_MIN_CURVATURE = 1e-9


def random_log_concave(length: int, seed: int, monotone: bool = False) -> Pmf:
    """Seeded random log-concave pmf with ``length`` support points.

    Log-weights are built from a mode outwards with slopes that only get
    steeper, so the sequence is strictly concave on the log scale.  Shapes
    range from nearly geometric to nearly Gaussian, with occasional flat
    tops (two equal maximal weights).  With ``monotone=True`` the mode sits
    at one end of the support.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    rng = np.random.default_rng(seed)
    offset = int(rng.integers(-5, 6))
    if length == 1:
        return Pmf(offset, [1.0])

    if monotone:
        mode = 0 if rng.random() < 0.5 else length - 1
    else:
        mode = int(rng.integers(0, length))

    slope_scale = 10.0 ** rng.uniform(-3.0, 0.5)
    bend_scale = 10.0 ** rng.uniform(-4.0, 0.0)
    # sparse bends keep long nearly log-affine stretches
    bend_prob = rng.uniform(0.05, 1.0)

    def side(n: int) -> np.ndarray:
        """Strictly increasing positive decrements for ``n`` steps away from the mode."""
        if n == 0:
            return np.empty(0)
        bends = rng.exponential(bend_scale, size=n) * (rng.random(n) < bend_prob)
        bends[0] = rng.exponential(slope_scale)
        return np.cumsum(bends + _MIN_CURVATURE)

    right = side(length - 1 - mode)
    left = side(mode)
    if left.size and right.size and rng.random() < 0.1:
        left = left - left[0]  # flat top: p[mode-1] == p[mode]

    logw = np.empty(length)
    logw[mode] = 0.0
    logw[mode + 1:] = -np.cumsum(right)
    logw[:mode] = -np.cumsum(left)[::-1]
    depth = -logw.min()
    if depth > _LOG_RANGE:
        logw *= _LOG_RANGE / depth

    w = np.exp(logw)
    pmf = Pmf(offset, w / math.fsum(w))
    if not is_log_concave(pmf, 0.0):
        # rounding broke a near-equality; a fresh draw is deterministic too
        return random_log_concave(length, seed + 0x9E3779B9, monotone)
    return pmf


@dataclass(frozen=True)
class Truncation:
    pmf: Pmf
    dropped_mass: float
    renormalized: bool


@dataclass(frozen=True)
class Geometric:
    """Geometric law on ``{0, 1, 2, ...}`` with success probability ``theta``.

    The mass at ``k`` is ``theta * (1 - theta)**k``.
    """

    theta: float

    def __post_init__(self):
        if not (0.0 < self.theta <= 1.0):
            raise ValueError(f"theta must lie in (0, 1], got {self.theta!r}")

    @property
    def ratio(self) -> float:
        return 1.0 - self.theta

    def mass(self, k: int) -> float:
        if k < 0:
            return 0.0
        if self.theta == 1.0:
            return 1.0 if k == 0 else 0.0
        return self.theta * math.exp(k * math.log1p(-self.theta))

    def tail(self, k: int) -> float:
        """``P(X >= k) = (1 - theta)**k``."""
        if k <= 0:
            return 1.0
        if self.theta == 1.0:
            return 0.0
        return math.exp(k * math.log1p(-self.theta))

    def power_sum(self, alpha: float) -> float:
        """``sum_k mass(k)**alpha = theta**alpha / (1 - (1 - theta)**alpha)``."""
        if alpha <= 0:
            raise ValueError("power sums diverge for alpha <= 0")
        if self.theta == 1.0:
            return 1.0
        return self.theta ** alpha / -math.expm1(alpha * math.log1p(-self.theta))

    def truncation_length(self, tol: float) -> int:
        """Smallest ``K`` with ``tail(K) < tol``."""
        if self.theta == 1.0:
            return 1
        k = max(1, math.ceil(math.log(tol) / math.log1p(-self.theta)))
        while self.tail(k) >= tol:
            k += 1
        while k > 1 and self.tail(k - 1) < tol:
            k -= 1
        return k

    def truncate(self, tol: float = 1e-15) -> Truncation:
        n = self.truncation_length(tol)
        if self.theta == 1.0:
            return Truncation(Pmf.point(0), 0.0, False)
        k = np.arange(n)
        w = self.theta * np.exp(k * math.log1p(-self.theta))
        w = w[w > 0]
        kept = math.fsum(w)
        return Truncation(Pmf(0, w / kept), 1.0 - kept, kept != 1.0)

    def to_pmf(self, tol: float = 1e-15) -> Pmf:
        return self.truncate(tol).pmf


def geometric(theta: float) -> Geometric:
    return Geometric(float(theta))


def _tsg_normalizer(p: float, q: float) -> float:
    return (1.0 - p) * (1.0 - q) / (1.0 - p * q)


@dataclass(frozen=True)
class TwoSidedGeo:
    """Two-sided geometric law with mode ``m``.

    The mass at ``n`` is ``peak * p**(n - m)`` for ``n >= m`` and
    ``peak * q**(m - n)`` for ``n <= m`` (``0**0 == 1``).  ``peak`` defaults
    to the analytic normalizer ``(1 - p)(1 - q)/(1 - pq)``; the extremal
    construction passes the exact maximum of the pmf it was built from, which
    must agree with the normalizer to ``1e-10`` relative.
    """

    p: float
    q: float
    m: int = 0
    peak: float | None = None

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if not (0.0 <= v < 1.0):
                raise ValueError(f"{name} must lie in [0, 1), got {v!r}")
        object.__setattr__(self, "m", int(self.m))
        if self.peak is not None:
            norm = _tsg_normalizer(self.p, self.q)
            if not (self.peak > 0 and abs(self.peak - norm) <= 1e-10 * norm):
                raise ValueError(
                    f"peak {self.peak!r} inconsistent with normalizer {norm!r}")

    @property
    def normalizer(self) -> float:
        return _tsg_normalizer(self.p, self.q)

    @property
    def mode_mass(self) -> float:
        return self.normalizer if self.peak is None else float(self.peak)

    @property
    def is_point_mass(self) -> bool:
        return self.p == 0.0 and self.q == 0.0

    def mass(self, n: int) -> float:
        d = n - self.m
        r = self.p if d >= 0 else self.q
        if d == 0:
            return self.mode_mass
        return self.mode_mass * r ** abs(d)

    def total_mass(self) -> float:
        return self.mode_mass * (1.0 / (1.0 - self.p) + 1.0 / (1.0 - self.q) - 1.0)

    def truncate(self, tol: float = 1e-15) -> Truncation:
        """Finite pmf keeping every point whose tail beyond it is below ``tol``."""

        def steps(r: float) -> int:
            if r == 0.0:
                return 0
            # tail beyond j steps: peak * r**(j+1) / (1 - r)
            j = math.ceil((math.log(tol) + math.log1p(-r)) / math.log(r))
            return max(j, 0)

        right, left = steps(self.p), steps(self.q)
        peak = self.mode_mass
        w = np.concatenate([
            peak * self.q ** np.arange(left, 0, -1, dtype=np.float64),
            [peak],
            peak * self.p ** np.arange(1, right + 1, dtype=np.float64),
        ])
        lo = self.m - left
        keep = np.nonzero(w > 0)[0]
        w = w[keep[0]:keep[-1] + 1]
        lo += int(keep[0])
        kept = math.fsum(w)
        return Truncation(Pmf(lo, w / kept), self.total_mass() - kept, kept != 1.0)

    def to_pmf(self, tol: float = 1e-15) -> Pmf:
        return self.truncate(tol).pmf


class NotLogConcaveError(ValueError):
    pass


class MajorizationError(ValueError):
    """A Schur comparison was requested for a pair that is not majorization-ordered."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class BoundReport:
    """Outcome of checking ``lhs <= rhs``.

    ``holds`` defaults to ``margin > -tol``; checks with several conditions
    pass it explicitly and explain themselves in ``extra``.
    """

    lhs: float
    rhs: float
    witness: dict
    tol: float = 1e-12
    holds: bool | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.holds is None:
            object.__setattr__(self, "holds", bool(self.margin > -self.tol))

    @property
    def margin(self) -> float:
        if self.lhs == self.rhs:
            return 0.0
        return self.rhs - self.lhs

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "holds": self.holds,
            "witness": self.witness,
            **({"extra": self.extra} if self.extra else {}),
        }


def truncation_tol(alpha: float, base: float = 1e-15) -> float:
    """Tail-mass cutoff leaving an order-``alpha`` power-sum tail near ``base``.

    Power sums of order ``alpha < 1`` feel a tail of mass ``t`` roughly like
    ``t**alpha``, so the cutoff tightens to ``base**(1/alpha)``.
    """
    if alpha >= 1.0:
        return base
    return max(base ** (1.0 / alpha), 1e-280)
