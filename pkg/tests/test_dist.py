"""Tests for the distribution module against oracles and identities."""

import math
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from snb import (
    DegenerateDistributionError,
    DomainError,
    Moments,
    SnbParams,
    TrialStoppedError,
    cdf,
    conditional_remaining,
    endpoint_split,
    enumerate_law,
    mgf,
    moments,
    pmf,
    quantile,
    success_probability,
    support,
)
from snb.oracle import read_law

FIXTURE_LAW = Path(__file__).parent / "data" / "law_p02_s7_t11.txt"

MGF_FIXTURES = [SnbParams(0.2, 7, 11), SnbParams(0.5, 3, 3), SnbParams(0.7, 4, 9)]


def exact_binomial_tail(p: float, s: int, t: int) -> float:
    """P[Binomial(s+t-1, p) >= s] in exact rational arithmetic."""
    n = s + t - 1
    pr = Fraction(p)
    total = sum(Fraction(math.comb(n, j)) * pr**j * (1 - pr) ** (n - j) for j in range(s, n + 1))
    return float(total)


class TestParams:
    def test_validation(self):
        for bad in [
            dict(p=-0.1, s=2, t=2),
            dict(p=1.0001, s=2, t=2),
            dict(p=math.nan, s=2, t=2),
            dict(p=0.5, s=0, t=2),
            dict(p=0.5, s=2, t=0),
            dict(p=0.5, s=-3, t=2),
        ]:
            with pytest.raises(DomainError):
                SnbParams(**bad)
        with pytest.raises(DomainError):
            SnbParams(0.5, 2.5, 2)

    def test_support(self, trial_params):
        assert list(support(trial_params)) == list(range(7, 18))
        assert list(support(SnbParams(0.5, 1, 1))) == [1]
        assert list(support(SnbParams(0.5, 4, 2))) == [2, 3, 4, 5]


class TestPmf:
    def test_deterministic_all_success(self):
        params = SnbParams(1.0, 3, 9)
        masses = {k: pmf(params, k) for k in support(params)}
        assert masses[3] == 1.0
        assert all(m == 0.0 for k, m in masses.items() if k != 3)

    def test_deterministic_all_failure(self):
        params = SnbParams(0.0, 3, 9)
        masses = {k: pmf(params, k) for k in support(params)}
        assert masses[9] == 1.0
        assert all(m == 0.0 for k, m in masses.items() if k != 9)

    def test_degenerate_has_no_nan(self):
        for p in (0.0, 1.0):
            for k in range(0, 20):
                value = pmf(SnbParams(p, 7, 11), k)
                assert not math.isnan(value)

    def test_zero_outside_support(self, trial_params):
        assert pmf(trial_params, 6) == 0.0
        assert pmf(trial_params, 18) == 0.0
        assert pmf(trial_params, 0) == 0.0

    def test_matches_frozen_oracle_fixture(self, trial_params):
        frozen = read_law(FIXTURE_LAW)
        assert sorted(frozen) == list(support(trial_params))
        for k, expected in frozen.items():
            assert pmf(trial_params, k) == pytest.approx(expected, abs=1e-12)

    def test_fixture_file_matches_live_enumeration(self, trial_params):
        frozen = read_law(FIXTURE_LAW)
        live = enumerate_law(trial_params).pmf_by_k
        assert frozen == dict(live)

    def test_relabeling_symmetry(self):
        for p in (0.0, 0.2, 0.5, 0.83, 1.0):
            for s, t in [(1, 1), (2, 5), (7, 11), (6, 6)]:
                flipped = SnbParams(1.0 - p, t, s)
                original = SnbParams(p, s, t)
                for k in support(original):
                    assert pmf(original, k) == pytest.approx(pmf(flipped, k), abs=1e-12)

    def test_normalization_sample_grid(self):
        for p in (0.0, 0.13, 0.5, 0.99, 1.0):
            for s, t in [(1, 1), (1, 12), (5, 8), (12, 12)]:
                total = sum(pmf(SnbParams(p, s, t), k) for k in support(SnbParams(p, s, t)))
                assert total == pytest.approx(1.0, abs=1e-12)


class TestCdf:
    def test_boundary_values(self, trial_params):
        assert cdf(trial_params, 6) == 0.0
        assert cdf(trial_params, 17) == pytest.approx(1.0, abs=1e-12)
        assert cdf(trial_params, 40) == pytest.approx(1.0, abs=1e-12)

    def test_matches_oracle_cumulative(self, trial_params):
        law = enumerate_law(trial_params).pmf_by_k
        running = 0.0
        for k in support(trial_params):
            running += law[k]
            assert cdf(trial_params, k) == pytest.approx(running, abs=1e-12)


class TestQuantile:
    def test_edge_levels(self, trial_params):
        assert quantile(trial_params, 0.0) == 7
        assert quantile(trial_params, 1.0) == 17
        assert quantile(SnbParams(1.0, 5, 2), 0.5) == 5
        assert quantile(SnbParams(1.0, 5, 2), 1.0) == 5

    def test_median_matches_oracle(self, trial_params):
        law = enumerate_law(trial_params).pmf_by_k
        running = 0.0
        median = None
        for k in sorted(law):
            running += law[k]
            if running >= 0.5:
                median = k
                break
        assert quantile(trial_params, 0.5) == median == 13

    def test_galois_connection(self, trial_params):
        for i in range(1001):
            u = i / 1000.0
            k = quantile(trial_params, u)
            assert cdf(trial_params, k) >= u - 1e-12
        for k in support(trial_params):
            assert quantile(trial_params, cdf(trial_params, k)) <= k

    def test_domain_error(self, trial_params):
        with pytest.raises(DomainError):
            quantile(trial_params, -0.01)
        with pytest.raises(DomainError):
            quantile(trial_params, 1.01)


class TestMoments:
    def test_deterministic_endpoints(self):
        assert moments(SnbParams(1.0, 7, 11)) == Moments(7.0, 0.0)
        assert moments(SnbParams(0.0, 7, 11)) == Moments(11.0, 0.0)

    def test_matches_oracle(self, trial_params):
        law = enumerate_law(trial_params)
        got = moments(trial_params)
        assert got.mean == pytest.approx(law.mean, abs=1e-12)
        assert got.variance == pytest.approx(law.variance, abs=1e-12)

    @given(
        st.floats(min_value=0.0, max_value=1.0),
        st.integers(min_value=1, max_value=9),
        st.integers(min_value=1, max_value=9),
    )
    def test_mean_inside_support_and_variance_nonnegative(self, p, s, t):
        got = moments(SnbParams(p, s, t))
        assert min(s, t) - 1e-9 <= got.mean <= s + t - 1 + 1e-9
        assert got.variance >= 0.0


class TestEndpointSplit:
    def test_indicator_ranges(self, trial_params):
        below_t = endpoint_split(trial_params, 9)
        assert below_t.failure_mass == 0.0
        assert below_t.success_mass > 0.0
        straight = endpoint_split(trial_params, 7)
        assert straight.success_mass == pytest.approx(0.2**7, rel=1e-12)
        assert straight.failure_mass == 0.0

    def test_both_terms_live_in_overlap(self, trial_params):
        split = endpoint_split(trial_params, 15)
        assert split.success_mass > 0.0
        assert split.failure_mass > 0.0
        assert split.total == pytest.approx(pmf(trial_params, 15), abs=0.0)

    def test_success_masses_sum_to_success_probability(self):
        for p in (0.1, 0.2, 0.5, 0.9):
            for s, t in [(2, 3), (7, 11), (5, 5)]:
                params = SnbParams(p, s, t)
                total = sum(endpoint_split(params, k).success_mass for k in support(params))
                assert total == pytest.approx(success_probability(params), abs=1e-12)


class TestSuccessProbability:
    def test_certainties(self):
        assert success_probability(SnbParams(1.0, 4, 9)) == 1.0
        assert success_probability(SnbParams(0.0, 4, 9)) == 0.0

    @given(st.integers(min_value=1, max_value=8))
    def test_riff_shuffle_symmetry(self, m):
        assert success_probability(SnbParams(0.5, m, m)) == pytest.approx(0.5, abs=1e-12)

    def test_trial_value_binomial_tail(self, trial_params):
        expected = exact_binomial_tail(0.2, 7, 11)
        got = success_probability(trial_params)
        assert got == pytest.approx(expected, abs=1e-13)
        assert got <= 0.1

    def test_binomial_tail_identity_grid(self):
        for p in (0.1, 0.25, 0.5, 0.8):
            for s, t in [(1, 1), (3, 2), (7, 11), (8, 8), (2, 12)]:
                got = success_probability(SnbParams(p, s, t))
                assert got == pytest.approx(exact_binomial_tail(p, s, t), abs=1e-12)

    def test_complementarity(self):
        for p in (0.0, 0.2, 0.5, 0.77, 1.0):
            for s, t in [(2, 3), (7, 11), (4, 4)]:
                one = success_probability(SnbParams(p, s, t))
                other = success_probability(SnbParams(1.0 - p, t, s))
                assert one + other == pytest.approx(1.0, abs=1e-12)


class TestMgf:
    def test_value_at_zero(self):
        for params in MGF_FIXTURES:
            assert mgf(params, 0.0) == pytest.approx(1.0, abs=1e-12)

    def test_matches_direct_sum(self):
        for params in MGF_FIXTURES:
            bound = -math.log(max(params.p, params.q))
            for i in range(20):
                # From well inside the domain up close to the bound.
                x = (-2.0) + (i + 0.5) / 20.0 * (bound + 2.0)
                direct = sum(math.exp(k * x) * pmf(params, k) for k in support(params))
                assert mgf(params, x) == pytest.approx(direct, rel=1e-10)

    def test_domain_bound_rejected(self, trial_params):
        bound = -math.log(max(trial_params.p, trial_params.q))
        with pytest.raises(DomainError):
            mgf(trial_params, bound)
        with pytest.raises(DomainError):
            mgf(trial_params, bound + 0.5)
        assert mgf(trial_params, bound - 1e-6) > 0.0

    def test_degenerate_p_rejected(self):
        with pytest.raises(DegenerateDistributionError):
            mgf(SnbParams(1.0, 3, 5), 0.1)
        with pytest.raises(DegenerateDistributionError):
            mgf(SnbParams(0.0, 3, 5), 0.1)

    def test_near_negative_binomial_for_large_t(self):
        # With t huge the failure boundary is never hit and the MGF tends
        # to the plain negative binomial one.
        params = SnbParams(0.3, 2, 500)
        x = 0.05
        nb = (params.p * math.exp(x) / (1.0 - params.q * math.exp(x))) ** params.s
        assert abs(mgf(params, x) - nb) <= 1e-6


class TestNegativeBinomialLimit:
    def test_pointwise_deviation_shrinks_in_t(self):
        s, p = 2, 0.3
        q = 1.0 - p
        deviations = []
        for t in (20, 50, 100, 500):
            params = SnbParams(p, s, t)
            worst = max(
                abs(pmf(params, s + j) - math.comb(s + j - 1, s - 1) * p**s * q**j)
                for j in range(6)
            )
            deviations.append(worst)
        assert all(hi >= lo for hi, lo in zip(deviations, deviations[1:]))
        assert deviations[-1] <= 1e-6


class TestConditionalRemaining:
    def test_no_interim_data(self, trial_params):
        assert conditional_remaining(trial_params, 0, 0) == trial_params

    def test_one_step_before_stop(self, trial_params):
        assert conditional_remaining(trial_params, 6, 8) == SnbParams(0.2, 1, 3)

    def test_already_stopped(self, trial_params):
        with pytest.raises(TrialStoppedError):
            conditional_remaining(trial_params, 7, 0)
        with pytest.raises(TrialStoppedError):
            conditional_remaining(trial_params, 0, 11)

    def test_negative_counts(self, trial_params):
        with pytest.raises(DomainError):
            conditional_remaining(trial_params, -1, 0)
        with pytest.raises(DomainError):
            conditional_remaining(trial_params, 0, -2)
