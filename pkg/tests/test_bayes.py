"""Tests for the conjugate Bayesian layer."""

import math

import pytest

from snb import (
    BetaPrior,
    DomainError,
    Endpoint,
    SnbParams,
    TrialStoppedError,
    log_beta,
    log_choose,
    pmf,
    posterior,
    posterior_given_endpoint,
    predicted_success_probability,
    predictive_pmf,
    predictive_pmf_hypergeometric,
    prior_times_likelihood,
    quadrature,
    success_probability,
)

PRIORS = [BetaPrior(0.5, 0.5), BetaPrior(1, 1), BetaPrior(2, 5)]


def success_term(prior: BetaPrior, s: int, t: int, k: int, p: float) -> float:
    """The response-boundary summand of the joint density, recomputed here."""
    if not s <= k <= s + t - 1 or p in (0.0, 1.0):
        return 0.0
    log_value = (
        log_choose(k - 1, s - 1)
        - log_beta(prior.alpha, prior.beta)
        + (prior.alpha + s - 1) * math.log(p)
        + (k - s + prior.beta - 1) * math.log(1.0 - p)
    )
    return math.exp(log_value)


class TestBetaPrior:
    def test_validation(self):
        for alpha, beta in [(0, 1), (1, 0), (-1, 1), (math.inf, 1), (math.nan, 2)]:
            with pytest.raises(DomainError):
                BetaPrior(alpha, beta)

    def test_mean(self):
        assert BetaPrior(2, 6).mean() == pytest.approx(0.25, abs=1e-15)

    def test_density_normalizes(self, jeffreys):
        assert quadrature(jeffreys.density, 1e-9) == pytest.approx(1.0, abs=1e-9)
        assert quadrature(BetaPrior(3, 2).density, 1e-9) == pytest.approx(1.0, abs=1e-9)

    def test_density_edges(self):
        assert BetaPrior(2, 2).density(0.0) == 0.0
        assert BetaPrior(1, 1).density(0.0) == 1.0
        assert math.isinf(BetaPrior(0.5, 0.5).density(0.0))
        with pytest.raises(DomainError):
            BetaPrior(1, 1).density(1.5)


class TestPriorTimesLikelihood:
    def test_uniform_prior_equals_pmf(self):
        prior = BetaPrior(1, 1)
        for s, t in [(2, 2), (7, 11), (3, 8)]:
            for k in range(min(s, t), s + t):
                for p in (0.0, 0.1, 0.2, 0.5, 0.9, 1.0):
                    expected = pmf(SnbParams(p, s, t), k)
                    assert prior_times_likelihood(prior, s, t, k, p) == pytest.approx(
                        expected, abs=1e-13
                    )

    @pytest.mark.parametrize("k", [7, 11, 15, 17])
    def test_integral_recovers_predictive(self, jeffreys, k):
        integral = quadrature(
            lambda p: prior_times_likelihood(jeffreys, 7, 11, k, p), 1e-9
        )
        assert integral == pytest.approx(predictive_pmf(jeffreys, 7, 11, k), abs=1e-9)

    def test_normalized_success_term_is_beta_density(self, jeffreys):
        # At (s=7, t=11, k=15) the success summand, normalized, must be
        # the Beta(7.5, 8.5) density.
        normalizer = quadrature(lambda p: success_term(jeffreys, 7, 11, 15, p), 1e-10)
        reference = BetaPrior(7.5, 8.5)
        for p in (0.05, 0.2, 0.44, 0.63, 0.9):
            normalized = success_term(jeffreys, 7, 11, 15, p) / normalizer
            assert normalized == pytest.approx(reference.density(p), rel=1e-8)

    def test_out_of_support_k_rejected(self, jeffreys):
        with pytest.raises(DomainError):
            prior_times_likelihood(jeffreys, 7, 11, 6, 0.3)
        with pytest.raises(DomainError):
            prior_times_likelihood(jeffreys, 7, 11, 18, 0.3)

    def test_p_validation(self, jeffreys):
        with pytest.raises(DomainError):
            prior_times_likelihood(jeffreys, 7, 11, 10, -0.2)


class TestPredictivePmf:
    @pytest.mark.parametrize("prior", PRIORS, ids=lambda b: f"a{b.alpha}_b{b.beta}")
    def test_sums_to_one(self, prior):
        total = sum(predictive_pmf(prior, 7, 11, k) for k in range(7, 18))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_single_trial(self):
        assert predictive_pmf(BetaPrior(1, 1), 1, 1, 1) == pytest.approx(1.0, abs=1e-12)

    def test_zero_outside_support(self, jeffreys):
        assert predictive_pmf(jeffreys, 7, 11, 6) == 0.0
        assert predictive_pmf(jeffreys, 7, 11, 18) == 0.0

    def test_matches_quadrature_on_small_fixture(self):
        prior = BetaPrior(2, 3)
        for k in range(3, 7):
            integral = quadrature(
                lambda p, kk=k: prior_times_likelihood(prior, 3, 4, kk, p), 1e-10
            )
            assert predictive_pmf(prior, 3, 4, k) == pytest.approx(integral, abs=1e-9)

    def test_prior_concentration_approaches_fixed_p(self):
        rho, s, t = 0.3, 5, 7
        target = SnbParams(rho, s, t)
        deviations = []
        for c in (1e2, 1e3, 1e4):
            prior = BetaPrior(c * rho, c * (1.0 - rho))
            worst = max(
                abs(predictive_pmf(prior, s, t, k) - pmf(target, k))
                for k in range(min(s, t), s + t)
            )
            deviations.append(worst)
        assert deviations[0] > deviations[1] > deviations[2]


class TestHypergeometricForm:
    def test_trivial_case(self):
        prior = BetaPrior(1, 1)
        assert predictive_pmf_hypergeometric(prior, 2, 2, 2) == pytest.approx(
            predictive_pmf(prior, 2, 2, 2), abs=1e-15
        )

    def test_agrees_with_beta_form_pointwise(self):
        prior = BetaPrior(3, 4)
        for k in range(7, 18):
            assert predictive_pmf_hypergeometric(prior, 7, 11, k) == pytest.approx(
                predictive_pmf(prior, 7, 11, k), abs=1e-12
            )

    def test_agrees_with_quadrature(self):
        prior = BetaPrior(2, 2)
        integral = quadrature(lambda p: prior_times_likelihood(prior, 2, 3, 4, p), 1e-10)
        assert predictive_pmf_hypergeometric(prior, 2, 3, 4) == pytest.approx(
            integral, abs=1e-9
        )

    def test_non_integer_prior_rejected(self, jeffreys):
        with pytest.raises(DomainError):
            predictive_pmf_hypergeometric(jeffreys, 7, 11, 10)


class TestPosterior:
    def test_weights_sum_to_one(self, jeffreys):
        for k in range(7, 18):
            mixture = posterior(jeffreys, 7, 11, k)
            assert mixture.weight_success + mixture.weight_failure == pytest.approx(
                1.0, abs=1e-12
            )

    def test_only_success_term_below_t(self, jeffreys):
        for k in range(3, 8):
            mixture = posterior(jeffreys, 3, 8, k)
            assert mixture.weight_success == 1.0
            assert mixture.weight_failure == 0.0
            assert mixture.component_failure is None

    def test_only_failure_term_below_s(self, jeffreys):
        for k in range(3, 8):
            mixture = posterior(jeffreys, 8, 3, k)
            assert mixture.weight_failure == 1.0
            assert mixture.component_success is None

    def test_jeffreys_trial_mixture_components(self, jeffreys):
        mixture = posterior(jeffreys, 7, 11, 15)
        assert mixture.component_success == (7.5, 8.5)
        assert mixture.component_failure == (4.5, 11.5)

    def test_jeffreys_weight_pinned_by_quadrature(self, jeffreys):
        success_mass = quadrature(lambda p: success_term(jeffreys, 7, 11, 15, p), 1e-10)
        total = quadrature(lambda p: prior_times_likelihood(jeffreys, 7, 11, 15, p), 1e-10)
        mixture = posterior(jeffreys, 7, 11, 15)
        assert mixture.weight_success == pytest.approx(success_mass / total, abs=1e-9)

    def test_density_matches_normalized_joint(self, jeffreys):
        mixture = posterior(jeffreys, 7, 11, 15)
        normalizer = predictive_pmf(jeffreys, 7, 11, 15)
        for p in (0.1, 0.25, 0.5, 0.8):
            expected = prior_times_likelihood(jeffreys, 7, 11, 15, p) / normalizer
            assert mixture.density(p) == pytest.approx(expected, rel=1e-10)

    def test_density_integrates_to_one(self, jeffreys):
        mixture = posterior(jeffreys, 7, 11, 15)
        assert quadrature(mixture.density, 1e-9) == pytest.approx(1.0, abs=1e-9)

    def test_out_of_support_rejected(self, jeffreys):
        with pytest.raises(DomainError):
            posterior(jeffreys, 7, 11, 18)


class TestPosteriorGivenEndpoint:
    def test_trial_success_case(self, jeffreys):
        assert posterior_given_endpoint(jeffreys, 7, 11, 15, Endpoint.SUCCESS) == (7.5, 8.5)

    def test_conjugate_updates(self):
        assert posterior_given_endpoint(BetaPrior(1, 1), 3, 5, 3, Endpoint.SUCCESS) == (4, 1)
        assert posterior_given_endpoint(BetaPrior(2, 1), 3, 4, 6, Endpoint.FAILURE) == (4, 5)

    def test_equals_mixture_component_exactly(self, jeffreys):
        mixture = posterior(jeffreys, 7, 11, 15)
        assert (
            posterior_given_endpoint(jeffreys, 7, 11, 15, Endpoint.SUCCESS)
            == mixture.component_success
        )
        assert (
            posterior_given_endpoint(jeffreys, 7, 11, 15, Endpoint.FAILURE)
            == mixture.component_failure
        )

    def test_inconsistent_pairs_rejected(self, jeffreys):
        with pytest.raises(DomainError):
            posterior_given_endpoint(jeffreys, 7, 11, 9, Endpoint.FAILURE)
        with pytest.raises(DomainError):
            posterior_given_endpoint(jeffreys, 11, 7, 9, Endpoint.SUCCESS)


class TestPredictedSuccessProbability:
    def test_one_decisive_trial_is_next_draw_mean(self):
        prior = BetaPrior(2, 5)
        got = predicted_success_probability(prior, 4, 6, 3, 5)
        assert got == pytest.approx((2 + 3) / (2 + 3 + 5 + 5), abs=1e-12)

    def test_uniform_prior_symmetric_design(self):
        # With no data and a flat prior, success and futility are
        # exchangeable, so the value is exactly one half.
        got = predicted_success_probability(BetaPrior(1, 1), 2, 2, 0, 0)
        integral = quadrature(
            lambda p: success_probability(SnbParams(p, 2, 2)), 1e-10
        )
        assert got == pytest.approx(0.5, abs=1e-12)
        assert got == pytest.approx(integral, abs=1e-9)

    def test_matches_quadrature_at_interim(self, jeffreys):
        s_obs, t_obs = 3, 5
        updated = BetaPrior(jeffreys.alpha + s_obs, jeffreys.beta + t_obs)
        integral = quadrature(
            lambda p: updated.density(p)
            * success_probability(SnbParams(p, 7 - s_obs, 11 - t_obs)),
            1e-10,
        )
        got = predicted_success_probability(jeffreys, 7, 11, s_obs, t_obs)
        assert got == pytest.approx(integral, abs=1e-9)

    def test_stopped_state_rejected(self, jeffreys):
        with pytest.raises(TrialStoppedError):
            predicted_success_probability(jeffreys, 7, 11, 7, 0)
        with pytest.raises(TrialStoppedError):
            predicted_success_probability(jeffreys, 7, 11, 0, 11)

    def test_negative_counts_rejected(self, jeffreys):
        with pytest.raises(DomainError):
            predicted_success_probability(jeffreys, 7, 11, -1, 0)
