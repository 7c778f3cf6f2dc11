import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from renyilab.core import (
    INF,
    ONE,
    Geometric,
    Order,
    OrderKind,
    Pmf,
    TwoSidedGeo,
    decreasing_rearrangement,
    geometric,
    is_log_concave,
    is_monotone,
    random_log_concave,
    truncation_tol,
)


class TestOrder:
    @pytest.mark.parametrize("spec, kind", [
        ("0", OrderKind.ZERO), ("1", OrderKind.ONE), ("2", OrderKind.TWO),
        ("inf", OrderKind.INFINITY), ("0.5", OrderKind.FINITE), (3.0, OrderKind.FINITE),
    ])
    def test_parse(self, spec, kind):
        assert Order.parse(spec).kind is kind

    def test_snaps_to_one(self):
        assert Order(1 + 5e-10) == ONE
        assert Order(1 - 1e-9) == ONE
        assert Order(1 + 2e-9).kind is OrderKind.FINITE

    @pytest.mark.parametrize("bad", ["-1", "nan", "abc", ""])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            Order.parse(bad)

    def test_ordering(self):
        assert Order(0.5) < ONE < Order(3) < INF


class TestPmf:
    def test_validation(self):
        with pytest.raises(ValueError):
            Pmf(0, [])
        with pytest.raises(ValueError):
            Pmf(0, [0.5, 0.0, 0.5])
        with pytest.raises(ValueError):
            Pmf(0, [0.5, 0.4])
        with pytest.raises(ValueError):
            Pmf(0, [1.5, -0.5])

    def test_immutable(self):
        f = Pmf(0, [0.5, 0.5])
        with pytest.raises(ValueError):
            f.probs[0] = 0.2

    def test_mirror(self):
        f = Pmf(2, [0.5, 0.3, 0.2])
        g = f.mirror()
        assert list(g.support) == [-4, -3, -2]
        assert g.mass(-2) == 0.5 and g.mass(-4) == 0.2

    @given(st.integers(-50, 50), st.lists(st.floats(1e-6, 1.0), min_size=1, max_size=40))
    def test_json_round_trip(self, offset, weights):
        f = Pmf.from_weights(weights, offset)
        assert Pmf.from_json(f.to_json()) == f

    def test_from_dict_rejects(self):
        with pytest.raises(ValueError):
            Pmf.from_dict({"offset": 0.5, "probs": [1.0]})
        with pytest.raises(ValueError):
            Pmf.from_dict({"offset": 0, "probs": ["a"]})
        with pytest.raises(ValueError):
            Pmf.from_dict([1.0])


class TestPredicates:
    def test_log_concave_examples(self):
        # a flat tail after a geometric decay breaks log-concavity: (1/8)^2 < (1/4)(1/8)
        assert not is_log_concave(Pmf(0, [1 / 2, 1 / 4, 1 / 8, 1 / 8]))
        assert not is_log_concave(Pmf(0, [1 / 8, 1 / 8, 1 / 4, 1 / 2]))
        assert is_log_concave(Pmf(0, [0.25, 0.5, 0.25]))
        assert is_log_concave(Pmf(0, [0.125, 0.375, 0.375, 0.125]))
        # 0.1**2 = 0.01 < 0.4 * 0.5
        assert not is_log_concave(Pmf(0, [0.4, 0.1, 0.5]), rel_tol=0.0)

    def test_log_affine_geometric_passes_exactly(self):
        f = Pmf.from_weights([1 / 2, 1 / 4, 1 / 8, 1 / 16])
        assert is_log_concave(f)

    def test_monotone_examples(self):
        assert is_monotone(Pmf(0, [0.5, 0.25, 0.25]))
        assert not is_monotone(Pmf(0, [0.25, 0.5, 0.25]))
        assert is_monotone(Pmf.point(7))
        assert is_monotone(Pmf(0, [0.1, 0.2, 0.7]))

    @pytest.mark.parametrize("probs, expected", [
        ([0.25, 0.5, 0.25], [0.5, 0.25, 0.25]),
        ([0.6, 0.3, 0.1], [0.6, 0.3, 0.1]),
        ([0.1, 0.3, 0.6], [0.6, 0.3, 0.1]),
    ])
    def test_rearrangement(self, probs, expected):
        assert decreasing_rearrangement(Pmf(0, probs)).tolist() == expected

    @given(st.lists(st.floats(1e-9, 1.0), min_size=1, max_size=60))
    def test_rearrangement_preserves_weights(self, weights):
        f = Pmf.from_weights(weights)
        r = decreasing_rearrangement(f)
        assert sorted(r.tolist()) == sorted(f.probs.tolist())
        assert abs(math.fsum(r) - math.fsum(f.probs)) <= 1e-15
        assert np.all(np.diff(r) <= 0)


class TestRandomLogConcave:
    def test_point_mass(self):
        f = random_log_concave(1, seed=3)
        assert len(f) == 1 and f.probs[0] == 1.0

    def test_deterministic(self):
        assert random_log_concave(17, seed=42) == random_log_concave(17, seed=42)
        assert random_log_concave(17, seed=42) != random_log_concave(17, seed=43)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            random_log_concave(0, seed=0)

    @pytest.mark.slow
    def test_always_log_concave(self):
        for seed in range(100_000):
            f = random_log_concave(1 + seed % 60, seed)
            assert is_log_concave(f, 0.0), seed
            assert len(f) == 1 + seed % 60

    def test_monotone_flag(self):
        for seed in range(2000):
            f = random_log_concave(1 + seed % 30, seed, monotone=True)
            assert is_monotone(f) and is_log_concave(f, 0.0)

    def test_shapes_vary(self):
        modes = {random_log_concave(20, s).argmax_index for s in range(300)}
        assert len(modes) > 10
        flat_tops = sum(
            np.count_nonzero(f.probs == f.max_mass) > 1
            for f in (random_log_concave(20, s) for s in range(500))
        )
        assert flat_tops > 0


class TestGeometric:
    def test_theta_one_is_point_mass(self):
        g = geometric(1.0)
        assert g.mass(0) == 1.0 and g.mass(1) == 0.0
        assert g.to_pmf() == Pmf.point(0)

    def test_half(self):
        g = geometric(0.5)
        for k in range(10):
            assert g.mass(k) == pytest.approx(0.5 ** (k + 1), rel=1e-15)

    def test_tail_against_series(self):
        g = geometric(0.5)
        series = math.fsum(g.mass(k) for k in range(3, 400))
        assert g.tail(3) == pytest.approx(series, rel=1e-15)
        assert g.tail(3) == pytest.approx(1 / 8, rel=1e-15)

    @pytest.mark.parametrize("theta", [0.9, 0.5, 0.1, 0.01])
    @pytest.mark.parametrize("alpha", [0.5, 1.5, 2.0, 7.0])
    def test_power_sum_against_series(self, theta, alpha):
        g = geometric(theta)
        n = g.truncation_length(1e-300 if alpha < 1 else 1e-30)
        series = math.fsum(g.mass(k) ** alpha for k in range(n))
        assert g.power_sum(alpha) == pytest.approx(series, rel=1e-12)

    @pytest.mark.parametrize("theta", [0.7, 0.5, 0.05, 1e-3])
    @pytest.mark.parametrize("tol", [1e-6, 1e-15])
    def test_truncation(self, theta, tol):
        t = geometric(theta).truncate(tol)
        assert t.dropped_mass < tol
        assert t.renormalized
        # the kept mass is 1 - (1 - theta)**n exactly
        assert (1 - theta) ** len(t.pmf) < tol
        assert (1 - theta) ** (len(t.pmf) - 1) >= tol

    @pytest.mark.parametrize("bad", [0.0, -0.1, 1.5])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            Geometric(bad)


class TestTwoSidedGeo:
    @pytest.mark.parametrize("p, q", [(0.0, 0.0), (0.5, 0.0), (0.3, 0.7), (0.9, 0.9)])
    def test_normalizer(self, p, q):
        g = TwoSidedGeo(p, q, m=3)
        brute = g.normalizer * (sum(p ** j for j in range(2000)) + sum(q ** j for j in range(1, 2000)))
        assert brute == pytest.approx(1.0, abs=1e-12)
        assert g.mass(3) == g.normalizer
        assert all(g.mass(n) <= g.mass(3) for n in range(-20, 30))

    def test_point_mass(self):
        g = TwoSidedGeo(0.0, 0.0, m=-4)
        assert g.mass(-4) == 1.0 and g.mass(-3) == 0.0 and g.mass(-5) == 0.0
        assert g.to_pmf() == Pmf.point(-4)

    def test_peak_must_match(self):
        TwoSidedGeo(0.5, 0.0, 0, peak=0.5)
        with pytest.raises(ValueError):
            TwoSidedGeo(0.5, 0.0, 0, peak=0.4)

    def test_truncate(self):
        g = TwoSidedGeo(0.6, 0.3, m=10)
        t = g.truncate(1e-15)
        assert abs(t.dropped_mass) < 1e-14
        assert t.pmf.argmax_index + t.pmf.offset == 10
        assert is_log_concave(t.pmf)


def test_truncation_tol():
    assert truncation_tol(2.0) == 1e-15
    assert truncation_tol(0.5) == pytest.approx(1e-30)
    assert truncation_tol(0.01) == 1e-280


def test_pmf_json_schema():
    f = Pmf(-2, [0.25, 0.5, 0.25])
    assert json.loads(f.to_json()) == {"offset": -2, "probs": [0.25, 0.5, 0.25]}
