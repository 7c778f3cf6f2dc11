"""Numerical probes of two open conjectures about finite positive sequences.

* ``F(t) = log(t * sum x_n**t)`` should be concave on ``t > 0`` for monotone
  log-concave ``x``.  Equivalently every monotone log-concave ``y`` has
  varentropy at most 1, since ``F''(t) = (varentropy(x**t) - 1) / t**2``.
* ``K(t) = (t + gamma) * sum y_n**(t/gamma)`` should be log-concave on
  ``t > -gamma`` for monotone concave ``y``; a stronger complex form asks
  for ``|K(u + iv)| >= K(u)``.

Searches report what they find; a violation is a result, not an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import lsq_linear

from .core import Pmf, random_log_concave
from .entropy import log_c, renyi

VIOLATION_TOL = 1e-10
COUNTEREXAMPLE = (0.25, 0.5, 1.0, 0.5, 0.25)


class ProbeKind(Enum):
    F_CONCAVITY = "F-concavity"
    VARENTROPY = "varentropy"
    K_LOGCONCAVITY = "K-logconcavity"
    COMPLEX_MODULUS = "complex-modulus"
    ORDER_GAP = "order-gap"


@dataclass(frozen=True)
class ProbeResult:
    kind: ProbeKind
    worst_value: float
    worst_witness: dict
    violated: bool
    threshold: float
    evaluations: int = 1
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind.value,
            "worst_value": self.worst_value,
            "threshold": self.threshold,
            "violated": self.violated,
            "evaluations": self.evaluations,
            "witness": self.worst_witness,
        }
        if self.extra:
            out["extra"] = self.extra
        return out


def _positive(seq: Iterable[float], name: str = "sequence") -> np.ndarray:
    arr = np.asarray(list(seq) if not isinstance(seq, np.ndarray) else seq, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError(f"{name} entries must be positive and finite")
    return arr


def _tilted_moments(logs: np.ndarray, s: float) -> tuple[float, float, float]:
    """``log sum exp(s*logs)``, and mean and variance of ``logs`` under weights ``exp(s*logs)``."""
    e = s * logs
    top = e.max()
    w = np.exp(e - top)
    total = math.fsum(w)
    w /= total
    mean = math.fsum(w * logs)
    var = math.fsum(w * (logs - mean) ** 2)
    return top + math.log(total), mean, var


def varentropy(y: Sequence[float]) -> float:
    """``[sum y log^2 y * sum y - (sum y log y)^2] / (sum y)^2``.

    The variance of ``log y`` under the weights ``y / sum y``; invariant
    under ``y -> c y``.
    """
    logs = np.log(_positive(y))
    return _tilted_moments(logs, 1.0)[2]


def F_value(x: Sequence[float], t: float) -> float:
    if t <= 0:
        raise ValueError("t must be positive")
    return math.log(t) + _tilted_moments(np.log(_positive(x)), t)[0]


def F_second_derivative(x: Sequence[float], t: float) -> float:
    """``F''(t) = -1/t**2 + (S'' S - S'**2) / S**2`` with ``S(t) = sum x_n**t``."""
    if t <= 0:
        raise ValueError("t must be positive")
    logs = np.log(_positive(x))
    return -1.0 / t ** 2 + _tilted_moments(logs, t)[2]


def F_curve(x: Sequence[float], t_grid: Sequence[float]) -> list[tuple[float, float, float]]:
    return [(float(t), F_value(x, t), F_second_derivative(x, t)) for t in t_grid]


def default_t_grid(n: int = 41) -> np.ndarray:
    return np.geomspace(0.1, 10.0, n)


def nonmonotone_counterexample() -> ProbeResult:
    """``(1/4, 1/2, 1, 1/2, 1/4)`` makes ``F`` convex near ``t = 3``."""
    value = F_second_derivative(COUNTEREXAMPLE, 3.0)
    return ProbeResult(ProbeKind.F_CONCAVITY, value,
                       {"sequence": list(COUNTEREXAMPLE), "t": 3.0},
                       violated=value > VIOLATION_TOL, threshold=0.0)


# -- varentropy search -------------------------------------------------------

def _cone_basis(n: int) -> np.ndarray:
    """Columns generating non-increasing concave sequences of length ``n``.

    ``z_j = z_0 - j*a - sum_{i=2}^{j} (j - i + 1) b_i`` with ``a, b_i >= 0``.
    """
    j = np.arange(n, dtype=np.float64)[:, None]
    cols = [np.ones((n, 1)), -j]
    if n > 2:
        i = np.arange(2, n, dtype=np.float64)[None, :]
        cols.append(-np.clip(j - i + 1.0, 0.0, None))
    return np.hstack(cols)


def project_monotone_log_concave(logs: np.ndarray) -> np.ndarray:
    """Least-squares projection of log-weights onto non-increasing concave sequences."""
    n = logs.size
    if n == 1:
        return logs.copy()
    basis = _cone_basis(n)
    lower = np.full(basis.shape[1], 0.0)
    lower[0] = -np.inf
    fit = lsq_linear(basis, logs, bounds=(lower, np.full(basis.shape[1], np.inf)),
                     method="bvls")
    return basis @ fit.x


def _hill_climb(logs: np.ndarray, rng: np.random.Generator, steps: int,
                step: float = 0.5) -> tuple[np.ndarray, float]:
    """Maximize varentropy by perturbing one log-weight at a time.

    Each move shifts one log-weight, projects back onto the monotone
    log-concave cone and is kept only if varentropy increases; rejected
    moves halve the step.
    """
    if logs[0] < logs[-1]:
        logs = logs[::-1]  # varentropy ignores order; the cone is non-increasing
    best = project_monotone_log_concave(logs)
    best_val = _tilted_moments(best, 1.0)[2]
    for _ in range(steps):
        if step < 1e-8:
            break
        trial = best.copy()
        trial[rng.integers(trial.size)] += step * rng.standard_normal()
        trial = project_monotone_log_concave(trial)
        trial -= trial.max()
        val = _tilted_moments(trial, 1.0)[2]
        if val > best_val:
            best, best_val = trial, val
        else:
            step *= 0.5
    return best, best_val


def _trial_seed(seed: int, i: int) -> int:
    return int(np.random.SeedSequence([seed, i]).generate_state(1)[0])


def conjecture51_search(trials: int, max_len: int = 30, seed: int = 0,
                        climb_top: int = 8, climb_steps: int = 300) -> ProbeResult:
    """Largest varentropy found over random monotone log-concave sequences.

    ``trials`` sequences of length ``1..max_len`` are drawn; the
    ``climb_top`` best are then refined by hill climbing.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    rng = np.random.default_rng([seed, 51])
    lengths = rng.integers(1, max_len + 1, size=trials)
    scored = []
    for i, n in enumerate(lengths.tolist()):
        probs = random_log_concave(n, _trial_seed(seed, i), monotone=True).probs
        scored.append((varentropy(probs), i, probs))
    scored.sort(key=lambda item: (-item[0], item[1]))
    best_val, _, best_seq = scored[0]
    best_seq = np.asarray(best_seq)
    for val, i, probs in scored[:climb_top]:
        logs, climbed = _hill_climb(np.log(probs), np.random.default_rng([seed, i, 1]),
                                    climb_steps)
        if climbed > best_val:
            best_val, best_seq = climbed, np.exp(logs)
    seq = best_seq / best_seq.sum()
    return ProbeResult(ProbeKind.VARENTROPY, float(best_val), {"sequence": seq.tolist()},
                       violated=best_val > 1.0 + VIOLATION_TOL, threshold=1.0,
                       evaluations=trials)


# -- K(t) and its complex form -----------------------------------------------

def is_monotone_concave(y: np.ndarray, rel_tol: float = 1e-12) -> bool:
    d = np.diff(y)
    monotone = bool(np.all(d <= 0) or np.all(d >= 0))
    if y.size < 3:
        return monotone
    mid = 0.5 * (y[:-2] + y[2:])
    return monotone and bool(np.all(y[1:-1] >= mid * (1.0 - rel_tol)))


def _admissible(y: Sequence[float], gamma: float) -> np.ndarray:
    arr = _positive(y)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if not is_monotone_concave(arr):
        raise ValueError("sequence must be monotone and concave")
    return arr


def logK(y: Sequence[float], gamma: float, t: float) -> float:
    arr = _admissible(y, gamma)
    if t <= -gamma:
        raise ValueError("t must exceed -gamma")
    return math.log(t + gamma) + _tilted_moments(np.log(arr), t / gamma)[0]


def logK_second_derivative(y: Sequence[float], gamma: float, t: float) -> float:
    """``(log K)''(t) = -1/(t+gamma)**2 + Var_w(log y) / gamma**2`` with ``w ~ y**(t/gamma)``."""
    arr = _admissible(y, gamma)
    if t <= -gamma:
        raise ValueError("t must exceed -gamma")
    return -1.0 / (t + gamma) ** 2 + _tilted_moments(np.log(arr), t / gamma)[2] / gamma ** 2


def logK_curve(y, gamma: float, t_grid) -> list[tuple[float, float, float]]:
    return [(float(t), logK(y, gamma, t), logK_second_derivative(y, gamma, t)) for t in t_grid]


def K_logconcavity_check(y: Sequence[float], gamma: float,
                         t_grid: Sequence[float]) -> ProbeResult:
    """Largest ``(log K)''`` over ``t_grid``; positive values break log-concavity."""
    arr = _admissible(y, gamma)
    grid = [float(t) for t in t_grid]
    if any(t <= -gamma for t in grid):
        raise ValueError("every grid point must exceed -gamma")
    values = [logK_second_derivative(arr, gamma, t) for t in grid]
    i = int(np.argmax(values))
    return ProbeResult(ProbeKind.K_LOGCONCAVITY, values[i],
                       {"sequence": arr.tolist(), "gamma": gamma, "t": grid[i]},
                       violated=values[i] > VIOLATION_TOL, threshold=0.0,
                       evaluations=len(grid))


def K_complex(y: Sequence[float], gamma: float, z: complex) -> complex:
    arr = _positive(y)
    return (z + gamma) * np.sum(np.exp((z / gamma) * np.log(arr)))


def modulus_ratios(y: Sequence[float], gamma: float, z_grid: Sequence[complex]) -> np.ndarray:
    """``|K(z)| / K(Re z)`` at every grid point.

    Both sides scale by ``c**(u/gamma)`` under ``y -> c y``, so the ratio is
    evaluated after shifting out the largest exponent.
    """
    logs = np.log(_positive(y))
    z = np.asarray(z_grid, dtype=np.complex128).reshape(-1)
    u = z.real
    s = (u / gamma)[:, None] * logs[None, :]
    shift = s.max(axis=1, keepdims=True)
    real_sum = np.exp(s - shift).sum(axis=1)
    phase = np.exp(1j * (z.imag / gamma)[:, None] * logs[None, :])
    complex_sum = (np.exp(s - shift) * phase).sum(axis=1)
    return (np.abs(z + gamma) * np.abs(complex_sum)) / ((u + gamma) * real_sum)


def default_z_grid(gamma: float, n_u: int = 25, n_v: int = 40,
                   u_max: float = 4.0, v_max: float = 10.0) -> np.ndarray:
    """``n_u * n_v`` points with ``-gamma < u <= u_max*gamma`` and ``|v| <= v_max*gamma``."""
    u = np.linspace(-gamma, u_max * gamma, n_u + 1)[1:]
    v = np.linspace(-v_max * gamma, v_max * gamma, n_v)
    return (u[:, None] + 1j * v[None, :]).reshape(-1)


def complex_modulus_check(y: Sequence[float], gamma: float,
                          z_grid: Sequence[complex] | None = None) -> ProbeResult:
    """Smallest ``|K(z)| / K(Re z) - 1`` over the grid; negative means ``|K(z)| < K(u)``."""
    arr = _admissible(y, gamma)
    grid = default_z_grid(gamma) if z_grid is None else np.asarray(z_grid, dtype=np.complex128)
    if np.any(grid.real <= -gamma):
        raise ValueError("every grid point needs real part > -gamma")
    deficit = modulus_ratios(arr, gamma, grid) - 1.0
    i = int(np.argmin(deficit))
    z = complex(grid[i])
    return ProbeResult(ProbeKind.COMPLEX_MODULUS, float(deficit[i]),
                       {"sequence": arr.tolist(), "gamma": gamma, "z": [z.real, z.imag]},
                       violated=bool(deficit[i] < -VIOLATION_TOL), threshold=0.0,
                       evaluations=grid.size)


def random_concave_monotone(length: int, seed) -> np.ndarray:
    """Positive, non-increasing, concave sequence starting at 1."""
    if length < 1:
        raise ValueError("length must be >= 1")
    rng = np.random.default_rng(seed)
    if length == 1:
        return np.ones(1)
    steps = np.cumsum(rng.exponential(1.0, size=length - 1) * (rng.random(length - 1) < 0.7))
    steps += rng.exponential(0.1)
    drop = steps.sum()
    last = rng.uniform(0.01, 0.99)
    if drop == 0.0:
        return np.ones(length)
    y = np.concatenate([[1.0], 1.0 - np.cumsum(steps) * ((1.0 - last) / drop)])
    return y


def complex_modulus_search(sequences: int = 100, max_len: int = 12, seed: int = 0,
                           z_points: tuple[int, int] = (25, 40)) -> ProbeResult:
    """Run :func:`complex_modulus_check` on random admissible sequences."""
    rng = np.random.default_rng([seed, 52])
    worst = None
    violations = []
    for i in range(sequences):
        n = int(rng.integers(1, max_len + 1))
        gamma = float(10.0 ** rng.uniform(-0.5, 0.5))
        y = random_concave_monotone(n, [seed, i])
        res = complex_modulus_check(y, gamma, default_z_grid(gamma, *z_points))
        if res.violated:
            violations.append(dict(res.worst_witness, value=res.worst_value))
        if worst is None or res.worst_value < worst.worst_value:
            worst = res
    return ProbeResult(ProbeKind.COMPLEX_MODULUS, worst.worst_value, worst.worst_witness,
                       violated=bool(violations), threshold=0.0,
                       evaluations=sequences * z_points[0] * z_points[1],
                       extra={"sequences": sequences, "violating_sequences": len(violations),
                              "violations": violations})


def order_gap_probe(trials: int, max_len: int = 30, seed: int = 0,
                    orders: Sequence[float] = (0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0)) -> ProbeResult:
    """``H_a - H_b <= log(c(a)/c(b))`` for ``a < b`` on random monotone log-concave pmfs.

    This comparison would follow from concavity of ``F``; it is probed, not
    asserted.  ``worst_value`` is the largest ``lhs - rhs`` seen.
    """
    rng = np.random.default_rng([seed, 46])
    worst = -math.inf
    witness: dict = {}
    pairs = [(a, b) for a in orders for b in orders if a < b]
    for i in range(trials):
        n = int(rng.integers(1, max_len + 1))
        f: Pmf = random_log_concave(n, _trial_seed(seed, i), monotone=True)
        ent = {a: renyi(f, a).value for a in orders}
        for a, b in pairs:
            excess = (ent[a] - ent[b]) - (log_c(a) - log_c(b))
            if excess > worst:
                worst = excess
                witness = {"pmf": f.to_dict(), "alpha": a, "beta": b}
    return ProbeResult(ProbeKind.ORDER_GAP, worst, witness,
                       violated=worst > VIOLATION_TOL, threshold=0.0,
                       evaluations=trials * len(pairs))
