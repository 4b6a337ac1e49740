import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmspec.ball import (DecayBound, ExactBallSpectrum, asymptotic_log_rate, exact_gauge,
                           exact_singular_value, product_gap, product_gap_limit, sup_log_defect)
from harmspec.dims import h_dim, n_dim
from harmspec.errors import DomainError
from harmspec.expo import sequence_gauge

CASES = [(2, 1.1), (2, 2.0), (3, 2.0), (3, 10.0), (4, 1.5), (5, 3.0)]


@pytest.mark.parametrize("d,gamma,n,expected", [
    (2, 2, 1, 0.5), (2, 2, 4, 0.125), (3, 2, 2, 2 ** -2.5)])
def test_exact_singular_value_examples(d, gamma, n, expected):
    assert exact_singular_value(ExactBallSpectrum(d, gamma), n) == pytest.approx(expected, rel=1e-15)


def test_exact_singular_value_rejects_zero_index():
    with pytest.raises(DomainError):
        exact_singular_value(ExactBallSpectrum(2, 2), 0)


@pytest.mark.parametrize("gamma", [1.0, 0.5])
def test_gamma_must_exceed_one(gamma):
    with pytest.raises(DomainError):
        ExactBallSpectrum(2, gamma)


@pytest.mark.parametrize("d,gamma", CASES)
def test_nonincreasing(d, gamma):
    spec = ExactBallSpectrum(d, gamma)
    vals = np.array(spec.prefix(10 ** 4).values)
    assert np.all(np.diff(vals) <= 0)
    # the prefix agrees with indexed access
    for n in (1, 2, 17, 999, 10 ** 4):
        assert vals[n - 1] == spec[n]


@pytest.mark.parametrize("d,gamma", CASES)
def test_block_multiplicities(d, gamma):
    spec = ExactBallSpectrum(d, gamma)
    vals = spec.prefix(h_dim(d, 8)).values
    for k in range(9):
        assert vals.count(spec.block_value(k)) == n_dim(d, k)


class TestExactGauge:
    def test_d2(self):
        g = exact_gauge(ExactBallSpectrum(2, 4))
        assert g.a == pytest.approx(math.log(2), rel=1e-15)
        assert g.alpha == 1
        assert g.value == pytest.approx(0.5, rel=1e-15)
        assert g.certified

    def test_d3(self):
        g = exact_gauge(ExactBallSpectrum(3, math.exp(2)))
        assert (g.a, g.alpha) == (pytest.approx(2, rel=1e-15), 0.5)
        assert g.value == pytest.approx(math.exp(-1), rel=1e-15)

    def test_value_independent_of_d(self):
        vals = {exact_gauge(ExactBallSpectrum(d, 3.3)).value for d in range(2, 9)}
        assert len(vals) == 1

    @pytest.mark.parametrize("d,gamma", CASES)
    def test_prefix_gauge_never_exceeds(self, d, gamma):
        spec = ExactBallSpectrum(d, gamma)
        g = exact_gauge(spec)
        for K in (0, 1, 5, 20):
            pref = sequence_gauge(spec.prefix(h_dim(d, K)), g.a, g.alpha).value
            assert pref <= g.value * (1 + 1e-13)

    @pytest.mark.parametrize("d,gamma", [c for c in CASES if c[0] <= 3])
    def test_prefix_gauge_attained_in_low_dimension(self, d, gamma):
        # for d = 2, 3 the supremum is reached at every block end n = h_d(K)
        spec = ExactBallSpectrum(d, gamma)
        g = exact_gauge(spec)
        for K in (1, 5, 20):
            pref = sequence_gauge(spec.prefix(h_dim(d, K)), g.a, g.alpha).value
            assert pref == pytest.approx(g.value, rel=1e-13)


@pytest.mark.parametrize("d,gamma,expected", [(2, math.e, -0.5), (3, math.e, -1.0)])
def test_asymptotic_log_rate(d, gamma, expected):
    assert asymptotic_log_rate(ExactBallSpectrum(d, gamma)) == pytest.approx(expected, rel=1e-15)


def test_asymptotic_rate_on_prefix():
    spec = ExactBallSpectrum(2, 2)
    n = h_dim(2, 200)
    assert math.log(spec[n]) / n == pytest.approx(asymptotic_log_rate(spec), rel=1e-2)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_log_log_ratio_converges(d):
    spec = ExactBallSpectrum(d, math.e)
    errs = []
    for k in (10, 50, 200):
        n = h_dim(d, k)
        errs.append(abs(math.log(abs(math.log(spec[n]))) / math.log(n) - 1 / (d - 1)))
    assert errs[0] > errs[1] > errs[2]


class TestSupLogDefect:
    def test_first_term(self):
        assert sup_log_defect(ExactBallSpectrum(2, 2), 1) == pytest.approx(-0.5 * math.log(2))

    def test_attained_d2(self):
        val = sup_log_defect(ExactBallSpectrum(2, 3), 100)
        assert val == pytest.approx(-0.5 * math.log(3), rel=1e-13)

    @settings(max_examples=60)
    @given(st.integers(2, 6), st.floats(1.01, 50), st.integers(1, 5000))
    def test_never_exceeds(self, d, gamma, n_max):
        spec = ExactBallSpectrum(d, gamma)
        assert sup_log_defect(spec, n_max) <= -0.5 * math.log(gamma) + 1e-12

    @pytest.mark.parametrize("d,gamma,n_max", [(2, 1.7, 57), (3, 4.0, 300), (4, 2.0, 500)])
    def test_matches_brute_force(self, d, gamma, n_max):
        spec = ExactBallSpectrum(d, gamma)
        fact = math.factorial(d - 1) / 2
        brute = max(math.log(spec[n]) + (n * fact) ** (1 / (d - 1)) * math.log(gamma)
                    for n in range(1, n_max + 1))
        assert sup_log_defect(spec, n_max) == pytest.approx(brute, abs=1e-12)


class TestProductGap:
    @pytest.mark.parametrize("x", [0.0, 0.5, 3.0, 1e4])
    def test_equal_entries(self, x):
        assert product_gap([1.7] * 4, x) == pytest.approx(1.7, rel=1e-12)

    def test_limit_is_mean(self):
        assert product_gap_limit([1, 2, 3]) == 2

    def test_at_zero(self):
        assert product_gap([1, 2, 3], 0) == pytest.approx(6 ** (1 / 3), rel=1e-15)

    def test_negative_inputs(self):
        with pytest.raises(DomainError):
            product_gap([1, -1], 1)
        with pytest.raises(DomainError):
            product_gap([1, 1], -1)

    def test_monotone_convergence(self):
        a = [0.3, 1.0, 2.5, 4.0]
        lim = product_gap_limit(a)
        diffs = [lim - product_gap(a, 10.0 ** j) for j in range(7)]
        assert all(x > 0 for x in diffs)
        assert all(x > y for x, y in zip(diffs, diffs[1:]))

    def test_against_direct_formula(self):
        a = np.array([0.2, 0.9, 1.4])
        for x in (0.1, 1.0, 10.0):
            assert product_gap(a, x) == pytest.approx(np.prod(x + a) ** (1 / 3) - x, rel=1e-12)


def test_decay_bound():
    b = DecayBound(2.0, 0.5, 1.0)
    assert b(2) == pytest.approx(2 * math.exp(-1))
    assert np.all(np.diff(b(np.arange(1, 10))) < 0)
    assert DecayBound(0.0, 1.0, 1.0)(5) == 0.0
