import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmspec.ball import ExactBallSpectrum
from harmspec.errors import DomainError, MismatchError
from harmspec.expo import (ExponentialGauge, FiniteSpectrum, compose_gauge, eigen_rate_transfer,
                           interleave_counterexample, sequence_gauge, sorted_eigenvalues,
                           sum_gauge, sum_rate)


def brute_gauge(values, a, alpha):
    return max(abs(x) * math.exp(a * n ** alpha) for n, x in enumerate(values, start=1))


class TestSequenceGauge:
    def test_constant_weighted_terms(self):
        x = FiniteSpectrum((math.exp(-1), math.exp(-2), math.exp(-3)))
        assert sequence_gauge(x, 1, 1).value == pytest.approx(1, rel=1e-15)

    def test_single_term(self):
        g = sequence_gauge(FiniteSpectrum((1, 0, 0)), 2, 0.5)
        assert g.value == pytest.approx(math.exp(2), rel=1e-15)
        assert not g.certified

    def test_exact_ball_prefix(self):
        x = ExactBallSpectrum(2, 4).prefix(100)
        assert sequence_gauge(x, math.log(2), 1).value == pytest.approx(0.5, rel=1e-13)

    def test_tail_flag_propagates(self):
        assert sequence_gauge(FiniteSpectrum((0.5,), tail_certified=True), 1, 1).certified

    def test_overflow_is_infinite(self):
        assert sequence_gauge(FiniteSpectrum((1.0,) * 10), 100, 1).value == math.inf

    @pytest.mark.parametrize("a,alpha", [(0, 1), (1, 0), (-1, 1)])
    def test_rejects_bad_rates(self, a, alpha):
        with pytest.raises(DomainError):
            sequence_gauge(FiniteSpectrum((1,)), a, alpha)

    @settings(max_examples=50)
    @given(st.lists(st.floats(0, 1), min_size=1, max_size=30),
           st.floats(0.01, 3), st.floats(0.05, 2), st.floats(0, 1), st.floats(0, 1))
    def test_matches_brute_force_and_is_monotone(self, xs, a, alpha, da, dalpha):
        spec = FiniteSpectrum.from_unsorted(xs)
        g = sequence_gauge(spec, a, alpha).value
        assert g == pytest.approx(brute_gauge(spec.values, a, alpha), rel=1e-12, abs=0)
        assert sequence_gauge(spec, a + da, alpha).value >= g * (1 - 1e-14)
        assert sequence_gauge(spec, a, alpha + dalpha).value >= g * (1 - 1e-14)


def test_finite_spectrum_must_be_sorted():
    with pytest.raises(DomainError):
        FiniteSpectrum((0.1, 0.2))
    with pytest.raises(DomainError):
        FiniteSpectrum((-0.1,))


class TestComposeGauge:
    def test_identity_factors(self):
        g = ExponentialGauge(1.5, 0.3, 2.0)
        assert compose_gauge(1, g, 1) == g

    def test_scaling(self):
        assert compose_gauge(2, ExponentialGauge(1, 0.5, 3), 0.5) == ExponentialGauge(1, 0.5, 3)

    def test_zero_operator(self):
        assert compose_gauge(0, ExponentialGauge(1, 1, 7), 5).value == 0


class TestSumRate:
    def test_single(self):
        assert sum_rate([0.37], 0.8) == 0.37

    def test_two_unit_rates(self):
        assert sum_rate([1, 1], 1) == 0.5

    @pytest.mark.parametrize("a,alpha", [(1.0, 1.0), (0.3, 0.5), (2.5, 1 / 3), (7.0, 2.0)])
    def test_equal_pair_halves_by_power(self, a, alpha):
        assert sum_rate([a, a], alpha) == 2 ** -alpha * a

    def test_errors(self):
        with pytest.raises(DomainError):
            sum_rate([], 1)
        with pytest.raises(DomainError):
            sum_rate([1, 0], 1)

    @given(st.lists(st.floats(0.01, 100), min_size=1, max_size=8), st.floats(0.1, 3),
           st.floats(0.1, 10), st.randoms(use_true_random=False))
    def test_properties(self, rates, alpha, t, rnd):
        ap = sum_rate(rates, alpha)
        shuffled = list(rates)
        rnd.shuffle(shuffled)
        assert sum_rate(shuffled, alpha) == pytest.approx(ap, rel=1e-13)
        assert sum_rate([t * r for r in rates], alpha) == pytest.approx(t * ap, rel=1e-12)
        assert ap <= min(rates)
        m = min(rates)
        extra = sum((m / r) ** (1 / alpha) for r in rates) - 1
        if len(rates) > 1 and extra > 1e-12:
            # strict once the other summands are visible in double precision
            assert ap < m


class TestSumGauge:
    def test_single(self):
        g = ExponentialGauge(2, 0.5, 3)
        assert sum_gauge([g]) == g

    def test_two(self):
        g = sum_gauge([ExponentialGauge(1, 1, 1), ExponentialGauge(1, 1, 1)])
        assert (g.a, g.alpha, g.value) == (0.5, 1, 2)

    def test_three(self):
        g = sum_gauge([ExponentialGauge(1, 1, 1), ExponentialGauge(2, 1, 5),
                       ExponentialGauge(3, 1, 2)])
        assert g.a == pytest.approx(6 / 11, rel=1e-15)
        assert g.value == 15

    def test_alpha_mismatch(self):
        with pytest.raises(MismatchError):
            sum_gauge([ExponentialGauge(1, 1, 1), ExponentialGauge(1, 0.5, 1)])


class TestEigenRateTransfer:
    def test_alpha_one(self):
        g = eigen_rate_transfer(ExponentialGauge(1, 1, 4.2))
        assert (g.a, g.alpha, g.value) == (0.5, 1, 4.2)

    def test_alpha_half(self):
        assert eigen_rate_transfer(ExponentialGauge(2, 0.5, 1)).a == pytest.approx(4 / 3, rel=1e-15)

    def test_alpha_must_be_positive(self):
        with pytest.raises(DomainError):
            ExponentialGauge(1, 0, 1)


class TestInterleave:
    def test_first_prefix(self):
        a, b, s = interleave_counterexample(1, 1, 1)
        assert a.values == pytest.approx((math.exp(-1), 0))
        assert s.values == pytest.approx((math.exp(-1), math.exp(-1)))

    def test_parts_have_unit_gauge(self):
        a, b, _ = interleave_counterexample(0.7, 0.6, 12)
        assert sequence_gauge(a, 0.7, 0.6).value == pytest.approx(1, rel=1e-14)
        assert sequence_gauge(b, 0.7, 0.6).value == pytest.approx(1, rel=1e-14)

    def test_sum_diverges_at_original_rate(self):
        _, _, s = interleave_counterexample(1, 1, 5)
        # position 2j holds e^{-j}: weighted value e^{j}, largest at j = 5
        assert sequence_gauge(s, 1, 1).value == pytest.approx(math.exp(5), rel=1e-13)

    @pytest.mark.parametrize("m", [1, 5, 40])
    def test_sum_bounded_at_halved_rate(self, m):
        _, _, s = interleave_counterexample(1, 1, m)
        assert sequence_gauge(s, 0.5, 1).value <= 1 + 1e-14


def test_sorted_eigenvalue_order():
    m = np.diag([0.5, -1.0, 1.0]).astype(complex)
    m[1, 1] = 1j
    ev = sorted_eigenvalues(m)
    assert list(ev) == [1.0, 1j, 0.5]
    rot = np.array([[0, -1], [1, 0]], dtype=float)
    assert list(sorted_eigenvalues(rot)) == [1j, -1j]


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 20), st.floats(0.05, 1.5), st.floats(0.2, 1.5), st.integers(0, 2 ** 32 - 1))
def test_eigen_gauge_bound_diagonal(n, a, alpha, seed):
    rng = np.random.default_rng(seed)
    diag = np.sort(rng.uniform(0, 1, n) * np.exp(-a * np.arange(1, n + 1) ** alpha))[::-1]
    sv = FiniteSpectrum(tuple(diag))
    ev = FiniteSpectrum.from_unsorted(sorted_eigenvalues(np.diag(diag)))
    lhs = sequence_gauge(ev, a / (1 + alpha), alpha).value
    assert lhs <= sequence_gauge(sv, a, alpha).value * (1 + 1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 25), st.floats(0.05, 1.0), st.floats(0.3, 1.5), st.integers(0, 2 ** 32 - 1))
def test_eigen_gauge_bound_dense(n, a, alpha, seed):
    rng = np.random.default_rng(seed)
    s = np.exp(-a * np.arange(1, n + 1) ** alpha) * rng.uniform(0.2, 1, n)
    s = np.sort(s)[::-1]
    u, _ = np.linalg.qr(rng.standard_normal((n, n)))
    v, _ = np.linalg.qr(rng.standard_normal((n, n)))
    mat = u @ np.diag(s) @ v.T
    sv = FiniteSpectrum(tuple(np.linalg.svd(mat, compute_uv=False)))
    ev = FiniteSpectrum.from_unsorted(sorted_eigenvalues(mat))
    lhs = sequence_gauge(ev, a / (1 + alpha), alpha).value
    assert lhs <= sequence_gauge(sv, a, alpha).value * (1 + 1e-9)
