"""Tests for Mann-Whitney U, Cliff's delta and Benjamini-Hochberg."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lingforge.errors import EmptyGroup, OutOfRange
from lingforge.stats.nonparametric import (
    GroupedSamples,
    benjamini_hochberg,
    cliffs_delta,
    mann_whitney_u,
    mwu_method,
)

values = st.lists(st.integers(min_value=-20, max_value=20), min_size=1, max_size=15)
wide_values = st.lists(st.integers(min_value=-100, max_value=100), min_size=1, max_size=50)
p_vectors = st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=1, max_size=40)


def _samples(a, b) -> GroupedSamples:
    return GroupedSamples("f", tuple(float(v) for v in a), tuple(float(v) for v in b))


def _brute_delta(a, b) -> float:
    return sum((x > y) - (x < y) for x in a for y in b) / (len(a) * len(b))


def _enumerated_p(a, b) -> float:
    """Two-sided exact p by enumerating every rank assignment (tie-free data)."""
    m, n = len(a), len(b)
    pooled = sorted(a + b)
    ranks = {v: i + 1 for i, v in enumerate(pooled)}
    observed = sum(ranks[v] for v in a) - m * (m + 1) / 2
    us = [sum(c) - m * (m + 1) / 2 for c in itertools.combinations(range(1, m + n + 1), m)]
    lower = sum(u <= observed for u in us) / len(us)
    upper = sum(u >= observed for u in us) / len(us)
    return min(1.0, 2 * min(lower, upper))


def _step_up(p_values) -> list[float]:
    """BH adjustment written out rank by rank, largest p first."""
    n = len(p_values)
    order = sorted(range(n), key=lambda i: p_values[i])
    adjusted = [0.0] * n
    running = float("inf")
    for rank in range(n, 0, -1):
        i = order[rank - 1]
        running = min(running, p_values[i] * n / rank)
        adjusted[i] = min(running, 1.0)
    return adjusted


class TestMannWhitney:
    """Test cases for mann_whitney_u."""

    def test_complete_separation(self):
        u, p = mann_whitney_u(_samples([1, 2, 3], [4, 5, 6]))
        assert u == 0.0
        assert p == pytest.approx(0.1)

    def test_all_equal(self):
        assert mann_whitney_u(_samples([1], [1])) == (0.5, 1.0)
        assert mann_whitney_u(_samples([2, 2, 2], [2, 2])) == (3.0, 1.0)

    @pytest.mark.parametrize("m,n", list(itertools.product(range(1, 7), repeat=2)))
    def test_exact_matches_enumeration(self, m, n):
        rng = np.random.default_rng(100 * m + n)
        for _ in range(3):
            pooled = rng.permutation(m + n).astype(float) + rng.random()
            a, b = pooled[:m].tolist(), pooled[m:].tolist()
            samples = _samples(a, b)
            assert mwu_method(samples) == "exact"
            _, p = mann_whitney_u(samples)
            assert p == pytest.approx(_enumerated_p(a, b), abs=1e-12, rel=0)

    def test_asymptotic_close_to_exact(self):
        """At m = n = 15 without ties the normal approximation stays within 0.01."""
        rng = np.random.default_rng(15)
        for shift in np.linspace(0.0, 1.5, 20):
            a = rng.normal(size=15).tolist()
            b = (rng.normal(size=15) + shift).tolist()
            samples = _samples(a, b)
            assert mwu_method(samples) == "exact"
            _, exact = mann_whitney_u(samples)
            _, approx = mann_whitney_u(samples, method="asymptotic")
            assert abs(exact - approx) <= 0.01

    def test_unknown_method(self):
        with pytest.raises(ValueError, match="method"):
            mann_whitney_u(_samples([1], [2]), method="permutation")

    def test_ties_use_asymptotic(self):
        samples = _samples([1, 2, 2], [2, 3, 4])
        assert mwu_method(samples) == "asymptotic"
        _, p = mann_whitney_u(samples)
        assert 0.0 < p <= 1.0

    def test_large_samples_use_asymptotic(self):
        samples = _samples(range(0, 42, 2), range(1, 42, 2))
        assert samples.m * samples.n > 400
        assert mwu_method(samples) == "asymptotic"

    @settings(deadline=None)
    @given(values, values)
    def test_u_relates_to_delta(self, a, b):
        """Cliff's delta equals 2U/(mn) - 1 for the control sample's U."""
        samples = _samples(a, b)
        u, p = mann_whitney_u(samples)
        assert cliffs_delta(samples) == pytest.approx(2 * u / (samples.m * samples.n) - 1)
        assert 0.0 <= p <= 1.0


class TestCliffsDelta:
    """Test cases for cliffs_delta."""

    def test_control_higher(self):
        assert cliffs_delta(_samples([4, 5, 6], [1, 2, 3])) == 1.0

    def test_balanced(self):
        assert cliffs_delta(_samples([1, 3], [2])) == 0.0

    @settings(max_examples=500, deadline=None)
    @given(wide_values, wide_values)
    def test_matches_double_loop(self, a, b):
        assert cliffs_delta(_samples(a, b)) == _brute_delta(a, b)

    @settings(max_examples=500, deadline=None)
    @given(wide_values, wide_values)
    def test_antisymmetric(self, a, b):
        assert cliffs_delta(_samples(a, b)) == -cliffs_delta(_samples(b, a))

    @settings(max_examples=500, deadline=None)
    @given(values, values, st.integers(min_value=1, max_value=5), st.integers(-10, 10))
    def test_invariant_to_increasing_transform(self, a, b, scale, shift):
        transformed = _samples([v * scale + shift for v in a], [v * scale + shift for v in b])
        assert cliffs_delta(transformed) == cliffs_delta(_samples(a, b))


class TestGroupedSamples:
    """Test cases for MISSING handling."""

    def test_missing_removed(self):
        samples = GroupedSamples.from_values("f", [1.0, None, float("nan")], [2.0, None])
        assert samples.control_values == (1.0,)
        assert samples.dementia_values == (2.0,)
        assert samples.excluded == 3

    def test_empty_group(self):
        with pytest.raises(EmptyGroup, match="dementia"):
            GroupedSamples.from_values("f", [1.0], [None])


class TestBenjaminiHochberg:
    """Test cases for benjamini_hochberg."""

    def test_step_up(self):
        assert benjamini_hochberg([0.01, 0.02, 0.03]) == pytest.approx([0.03, 0.03, 0.03])

    def test_equal_values(self):
        assert benjamini_hochberg([0.05, 0.05]) == pytest.approx([0.05, 0.05])

    def test_single(self):
        assert benjamini_hochberg([0.05]) == [0.05]

    def test_input_order_kept(self):
        assert benjamini_hochberg([0.04, 0.001, 0.5]) == pytest.approx([0.06, 0.003, 0.5])

    def test_capped_at_one(self):
        assert benjamini_hochberg([0.9, 0.8]) == pytest.approx([0.9, 0.9])
        assert max(benjamini_hochberg([1.0, 1.0, 0.99])) <= 1.0

    def test_empty(self):
        assert benjamini_hochberg([]) == []

    @pytest.mark.parametrize("bad", [[0.5, float("nan")], [-0.1], [1.2]])
    def test_out_of_range(self, bad):
        with pytest.raises(OutOfRange):
            benjamini_hochberg(bad)

    @settings(max_examples=1000, deadline=None)
    @given(p_vectors)
    def test_matches_hand_step_up(self, p_values):
        assert benjamini_hochberg(p_values) == _step_up(p_values)

    @settings(max_examples=1000, deadline=None)
    @given(p_vectors)
    def test_properties(self, p_values):
        """Adjusted values dominate raw ones and preserve their order."""
        adjusted = np.asarray(benjamini_hochberg(p_values))
        raw = np.asarray(p_values)
        assert np.all(adjusted >= raw - 1e-12)
        assert np.all(adjusted <= 1.0)
        order = np.argsort(raw, kind="stable")
        assert np.all(np.diff(adjusted[order]) >= -1e-12)
