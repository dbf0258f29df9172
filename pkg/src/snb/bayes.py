"""Beta-prior layer over the stopped negative binomial design.

With a Beta(alpha, beta) prior on the response probability, the joint
density of p and the stopping draw k factors into two closed-form pieces,
one per boundary.  Integrating p out gives the predictive mass of k;
conditioning on k gives a two-component beta mixture for p; conditioning
additionally on the boundary gives a single beta.  All of it is exact
conjugate bookkeeping, no sampling involved.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dist import Endpoint
from .errors import DomainError, TrialStoppedError
from .special import log_beta, log_choose


def _validate_design(s: int, t: int) -> tuple[int, int]:
    s = operator.index(s)
    t = operator.index(t)
    if s < 1 or t < 1:
        raise DomainError(f"s and t must be at least 1, got s={s}, t={t}")
    return s, t


def _pow(base: float, expo: float) -> float:
    """base**expo with the 0**0 = 1 convention and honest limits at 0."""
    if base == 0.0:
        if expo == 0.0:
            return 1.0
        return 0.0 if expo > 0.0 else math.inf
    return math.exp(expo * math.log(base))


def _beta_pdf(a: float, b: float, p: float) -> float:
    return _pow(p, a - 1.0) * _pow(1.0 - p, b - 1.0) / math.exp(log_beta(a, b))


@dataclass(frozen=True)
class BetaPrior:
    """A Beta(alpha, beta) distribution on the response probability."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        alpha = float(self.alpha)
        beta = float(self.beta)
        if not (alpha > 0.0 and beta > 0.0) or math.isinf(alpha) or math.isinf(beta):
            raise DomainError(
                f"prior shapes must be positive finite, got alpha={self.alpha!r}, "
                f"beta={self.beta!r}"
            )
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)

    def density(self, p: float) -> float:
        p = float(p)
        if math.isnan(p) or not 0.0 <= p <= 1.0:
            raise DomainError(f"density argument must lie in [0, 1], got {p!r}")
        return _beta_pdf(self.alpha, self.beta, p)


@dataclass(frozen=True)
class PosteriorMixture:
    """Posterior of p given the stopping draw: a two-component beta mixture.

    A component is None exactly when its boundary cannot produce the
    conditioning draw, in which case its weight is zero.
    """

    weight_success: float
    component_success: Optional[tuple[float, float]]
    weight_failure: float
    component_failure: Optional[tuple[float, float]]

    def density(self, p: float) -> float:
        p = float(p)
        if math.isnan(p) or not 0.0 <= p <= 1.0:
            raise DomainError(f"density argument must lie in [0, 1], got {p!r}")
        total = 0.0
        if self.component_success is not None and self.weight_success > 0.0:
            a, b = self.component_success
            total += self.weight_success * _beta_pdf(a, b, p)
        if self.component_failure is not None and self.weight_failure > 0.0:
            a, b = self.component_failure
            total += self.weight_failure * _beta_pdf(a, b, p)
        return total


def prior_times_likelihood(prior: BetaPrior, s: int, t: int, k: int, p: float) -> float:
    """Joint density of (p, stopping draw = k), before any normalization.

    Exact at p = 0 and p = 1 under the 0**0 = 1 convention; the value may
    be infinite there when a prior shape is below one, matching the
    density limit.

    Raises:
        DomainError: If k is outside the support or p outside [0, 1].
    """
    s, t = _validate_design(s, t)
    k = operator.index(k)
    if not min(s, t) <= k <= s + t - 1:
        raise DomainError(f"k={k} is outside the support [{min(s, t)}, {s + t - 1}]")
    p = float(p)
    if math.isnan(p) or not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    a, b = prior.alpha, prior.beta
    norm = math.exp(-log_beta(a, b))
    q = 1.0 - p
    total = 0.0
    if s <= k:
        coef = math.exp(log_choose(k - 1, s - 1)) * norm
        total += coef * _pow(p, a + s - 1.0) * _pow(q, b + k - s - 1.0)
    if t <= k:
        coef = math.exp(log_choose(k - 1, t - 1)) * norm
        total += coef * _pow(p, a + k - t - 1.0) * _pow(q, b + t - 1.0)
    return total


def _predictive_terms(prior: BetaPrior, s: int, t: int, k: int) -> tuple[float, float]:
    """Success and failure summands of the predictive mass at k."""
    a, b = prior.alpha, prior.beta
    log_norm = log_beta(a, b)
    term_s = 0.0
    term_f = 0.0
    if s <= k <= s + t - 1:
        term_s = math.exp(log_choose(k - 1, s - 1) + log_beta(a + s, k - s + b) - log_norm)
    if t <= k <= s + t - 1:
        term_f = math.exp(log_choose(k - 1, t - 1) + log_beta(a + k - t, t + b) - log_norm)
    return term_s, term_f


def predictive_pmf(prior: BetaPrior, s: int, t: int, k: int) -> float:
    """Marginal probability of stopping at draw k under the prior.

    Zero outside the support [min(s, t), s + t - 1].
    """
    s, t = _validate_design(s, t)
    k = operator.index(k)
    term_s, term_f = _predictive_terms(prior, s, t, k)
    return term_s + term_f


def predictive_pmf_hypergeometric(prior: BetaPrior, s: int, t: int, k: int) -> float:
    """Predictive mass rewritten with binomial coefficients only.

    Requires integer prior shapes; everything is then rational and the
    value is computed exactly before one final rounding.  Agrees with
    :func:`predictive_pmf` to within floating-point error.

    Raises:
        DomainError: If either prior shape is not a positive integer.
    """
    s, t = _validate_design(s, t)
    k = operator.index(k)
    a_f, b_f = prior.alpha, prior.beta
    if not (a_f.is_integer() and b_f.is_integer()):
        raise DomainError(
            f"the hypergeometric form needs integer prior shapes, got "
            f"alpha={a_f!r}, beta={b_f!r}"
        )
    a, b = int(a_f), int(b_f)
    total = Fraction(0)
    if s <= k <= s + t - 1:
        total += (
            Fraction(math.comb(k - 1, s - 1) * math.comb(a + b, a), math.comb(a + b + k - 1, a + s - 1))
            * Fraction(a, a + b)
            * Fraction(b, k - s + b)
        )
    if t <= k <= s + t - 1:
        total += (
            Fraction(math.comb(k - 1, t - 1) * math.comb(a + b, b), math.comb(a + b + k - 1, b + t - 1))
            * Fraction(b, a + b)
            * Fraction(a, k - t + a)
        )
    return float(total)


def posterior(prior: BetaPrior, s: int, t: int, k: int) -> PosteriorMixture:
    """Posterior of p given that the process stopped at draw k.

    The mixture weights are the two predictive summands at k, normalized;
    the components are the conjugate updates for each boundary.

    Raises:
        DomainError: If k is outside the support.
    """
    s, t = _validate_design(s, t)
    k = operator.index(k)
    if not min(s, t) <= k <= s + t - 1:
        raise DomainError(f"k={k} is outside the support [{min(s, t)}, {s + t - 1}]")
    term_s, term_f = _predictive_terms(prior, s, t, k)
    total = term_s + term_f
    a, b = prior.alpha, prior.beta
    comp_s = (a + s, b + (k - s)) if s <= k else None
    comp_f = (a + (k - t), b + t) if t <= k else None
    return PosteriorMixture(
        weight_success=term_s / total,
        component_success=comp_s,
        weight_failure=term_f / total,
        component_failure=comp_f,
    )


def posterior_given_endpoint(
    prior: BetaPrior, s: int, t: int, k: int, endpoint: Endpoint
) -> tuple[float, float]:
    """Beta parameters of p given the stopping draw and its boundary.

    Raises:
        DomainError: If the boundary cannot produce a stop at draw k.
    """
    s, t = _validate_design(s, t)
    k = operator.index(k)
    if endpoint is Endpoint.SUCCESS:
        if not s <= k <= s + t - 1:
            raise DomainError(f"a success stop at k={k} is impossible for (s={s}, t={t})")
        return (prior.alpha + s, prior.beta + (k - s))
    if endpoint is Endpoint.FAILURE:
        if not t <= k <= s + t - 1:
            raise DomainError(f"a failure stop at k={k} is impossible for (s={s}, t={t})")
        return (prior.alpha + (k - t), prior.beta + t)
    raise DomainError(f"unknown endpoint {endpoint!r}")


def predicted_success_probability(
    prior: BetaPrior, s: int, t: int, s_obs: int, t_obs: int
) -> float:
    """Chance of ultimately stopping on the response boundary, averaged over p.

    Folds the interim counts into the prior, then sums the success
    summands of the predictive mass of the remaining design.

    Raises:
        TrialStoppedError: If the interim counts already reach a boundary.
        DomainError: If an observed count is negative.
    """
    s, t = _validate_design(s, t)
    s_obs = operator.index(s_obs)
    t_obs = operator.index(t_obs)
    if s_obs < 0 or t_obs < 0:
        raise DomainError(f"observed counts must be nonnegative, got s_obs={s_obs}, t_obs={t_obs}")
    if s_obs >= s or t_obs >= t:
        raise TrialStoppedError(
            f"interim counts (s_obs={s_obs}, t_obs={t_obs}) already sit on a "
            f"stopping boundary of (s={s}, t={t})"
        )
    updated = BetaPrior(prior.alpha + s_obs, prior.beta + t_obs)
    s_rem = s - s_obs
    t_rem = t - t_obs
    total = 0.0
    for k in range(s_rem, s_rem + t_rem):
        term_s, _ = _predictive_terms(updated, s_rem, t_rem, k)
        total += term_s
    return total
