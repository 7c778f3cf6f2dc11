"""Majorization of integer pmfs and the extremal two-sided geometric majorant.

Every log-concave pmf ``f`` majorizes a two-sided geometric law ``phi`` that
has the same maximal mass and total mass.  :func:`extremal_tsg` builds it
side by side: the half of ``f`` on either side of its mode is matched by a
geometric tail that starts at ``max f`` and carries the same mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BoundReport,
    MajorizationError,
    NotLogConcaveError,
    Pmf,
    TwoSidedGeo,
    decreasing_rearrangement,
    is_log_concave,
)
from .entropy import renyi, renyi_two_sided_geo

MARGIN_TOL = 1e-12
MASS_TOL = 1e-10

BISECT_EPS = 1e-15
BISECT_TOL = 1e-14
BISECT_MAX_ITER = 200


@dataclass(frozen=True)
class MajorizationReport:
    holds: bool
    first_violation_index: int | None  # k (1-based) of the first failing partial sum
    min_margin: float
    total_mass_gap: float

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "first_violation_index": self.first_violation_index,
            "min_margin": self.min_margin,
            "total_mass_gap": self.total_mass_gap,
        }


def accurate_cumsum(x: np.ndarray) -> np.ndarray:
    """Running sums with Neumaier compensation."""
    out = np.empty(len(x))
    s = 0.0
    comp = 0.0
    for i, v in enumerate(x.tolist()):
        t = s + v
        if abs(s) >= abs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
        out[i] = s + comp
    return out


def _report(margins: np.ndarray, total_gap: float) -> MajorizationReport:
    bad = np.nonzero(margins < -MARGIN_TOL)[0]
    first = int(bad[0]) + 1 if bad.size else None
    holds = first is None and abs(total_gap) <= MASS_TOL
    return MajorizationReport(holds, first, float(margins.min()), total_gap)


def majorizes(f: Pmf, g: Pmf) -> MajorizationReport:
    """Test ``f > g``: every partial sum of ``f`` sorted descending dominates ``g``'s."""
    n = max(len(f), len(g))
    fs = accurate_cumsum(decreasing_rearrangement(f))
    gs = accurate_cumsum(decreasing_rearrangement(g))
    fs = np.concatenate([fs, np.full(n - fs.size, fs[-1])])
    gs = np.concatenate([gs, np.full(n - gs.size, gs[-1])])
    return _report(fs - gs, float(fs[-1] - gs[-1]))


def _merge_counts(p: float, q: float, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Right/left tail terms used by the ``k`` largest masses of a two-sided geometric.

    Greedy merge of the two descending tails; ties go to the right tail.
    """
    log_p = math.log(p) if p > 0 else -math.inf
    log_q = math.log(q) if q > 0 else -math.inf
    right = np.zeros(k, dtype=np.int64)
    left = np.zeros(k, dtype=np.int64)
    r = l = 0
    for i in range(1, k):
        if (r + 1) * log_p >= (l + 1) * log_q:
            r += 1
        else:
            l += 1
        right[i] = r
        left[i] = l
    return right, left


def _tail_partial(ratio: float, count: np.ndarray) -> np.ndarray:
    """``sum_{j=1}^{count} ratio**j`` in closed form."""
    if ratio == 0.0:
        return np.zeros(count.shape)
    return ratio * -np.expm1(count * math.log(ratio)) / (1.0 - ratio)


def tsg_partial_sums(g: TwoSidedGeo, k: int) -> np.ndarray:
    """First ``k`` partial sums of the decreasing rearrangement of ``g``."""
    right, left = _merge_counts(g.p, g.q, k)
    return g.mode_mass * (1.0 + _tail_partial(g.p, right) + _tail_partial(g.q, left))


def majorizes_tsg(f: Pmf, g: TwoSidedGeo) -> MajorizationReport:
    """Test ``f > g`` for a two-sided geometric ``g`` with infinite support.

    Partial sums are compared up to the support size of ``f``; past it the
    sums of ``f`` are constant and those of ``g`` increase to its total mass,
    so the infimum of the remaining margins is the total mass gap.
    """
    fs = accurate_cumsum(decreasing_rearrangement(f))
    gs = tsg_partial_sums(g, len(f))
    total_gap = fs[-1] - g.total_mass()
    margins = np.append(fs - gs, total_gap)
    return _report(margins, float(total_gap))


def bisect_increasing(fn, target: float, lo: float, hi: float,
                      tol: float = BISECT_TOL, max_iter: int = BISECT_MAX_ITER) -> float:
    """Root of ``fn(x) = target`` for increasing ``fn`` on ``[lo, hi]``."""
    f_lo = fn(lo) - target
    if f_lo >= 0:
        return lo
    f_hi = fn(hi) - target
    if f_hi <= 0:
        return hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = fn(mid) - target
        if abs(f_mid) <= tol:
            return mid
        if f_mid < 0:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return lo if -f_lo <= f_hi else hi


def side_ratio(peak: float, side_mass: float) -> float:
    """Ratio ``r`` with ``peak * sum_{j>=0} r**j = side_mass``."""
    return bisect_increasing(lambda r: peak / (1.0 - r), side_mass, 0.0, 1.0 - BISECT_EPS)


def extremal_tsg(f: Pmf) -> TwoSidedGeo:
    """Two-sided geometric law majorized by the log-concave pmf ``f``.

    The mode mass is copied from ``max f`` so both laws share their
    min-entropy.  The split point is the leftmost maximizer; when the mass
    right of it is the smaller half the pmf is mirrored first, which moves
    the split to the rightmost maximizer.
    """
    if not is_log_concave(f):
        raise NotLogConcaveError("extremal_tsg requires a log-concave pmf")
    probs = f.probs
    peak = float(probs.max())
    split = int(np.argmax(probs))
    right = math.fsum(probs[split:])
    left = math.fsum(probs[:split + 1])
    if right < left:
        split = len(probs) - 1 - int(np.argmax(probs[::-1]))
        right = math.fsum(probs[split:])
        left = math.fsum(probs[:split + 1])
    p = side_ratio(peak, right)
    q = side_ratio(peak, left)
    return TwoSidedGeo(p, q, f.offset + split, peak=peak)


def schur_check(f: Pmf, g: Pmf | TwoSidedGeo, a) -> BoundReport:
    """``H_a(f) <= H_a(g)`` for a majorizing pair ``f > g`` (Schur concavity)."""
    if isinstance(g, TwoSidedGeo):
        maj = majorizes_tsg(f, g)
        rhs = renyi_two_sided_geo(g, a).value
        desc = {"p": g.p, "q": g.q, "m": g.m}
    else:
        maj = majorizes(f, g)
        rhs = renyi(g, a).value
        desc = g.to_dict()
    if not maj.holds:
        raise MajorizationError(
            f"f does not majorize g (first violation at k={maj.first_violation_index}, "
            f"mass gap {maj.total_mass_gap:.3g})", maj)
    lhs = renyi(f, a).value
    return BoundReport(lhs, rhs, {"f": f.to_dict(), "g": desc, "order": str(a)}, tol=1e-10,
                       extra={"min_margin": maj.min_margin})
