"""The stopped negative binomial law.

Enroll subjects one at a time, each responding independently with
probability p.  Stop as soon as either s responses or t non-responses
have accumulated.  The enrollment count at the stop is a random variable
supported on {min(s, t), ..., s + t - 1}; this module provides its mass
function, distribution function, moments, generating function, and the
conditional law after an interim look.

Each mass splits into a success part (the s-th response arrives at draw k)
and a failure part (the t-th non-response arrives at draw k):

    P[Y = k] = C(k-1, s-1) p^s q^(k-s) [s <= k <= s+t-1]
             + C(k-1, t-1) q^t p^(k-t) [t <= k <= s+t-1]

with q = 1 - p and the convention 0**0 = 1, which makes the formula exact
at p = 0 and p = 1 where the law is a point mass at t or s.
"""

from __future__ import annotations

import enum
import math
import operator
from dataclasses import dataclass

from .errors import DegenerateDistributionError, DomainError, TrialStoppedError
from .special import log_choose, reg_inc_beta


class Endpoint(enum.Enum):
    """Which boundary a stopped path hit."""

    SUCCESS = "success"
    FAILURE = "failure"


@dataclass(frozen=True)
class SnbParams:
    """Parameter triple: response probability and the two stopping counts.

    Attributes:
        p: Per-subject response probability, in [0, 1].
        s: Responses needed to stop for success, a positive integer.
        t: Non-responses needed to stop for futility, a positive integer.
    """

    p: float
    s: int
    t: int

    def __post_init__(self) -> None:
        try:
            s = operator.index(self.s)
            t = operator.index(self.t)
        except TypeError as exc:
            raise DomainError(f"s and t must be integers, got s={self.s!r}, t={self.t!r}") from exc
        p = float(self.p)
        if math.isnan(p) or not 0.0 <= p <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got p={self.p!r}")
        if s < 1 or t < 1:
            raise DomainError(f"s and t must be at least 1, got s={s}, t={t}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    @property
    def q(self) -> float:
        return 1.0 - self.p


@dataclass(frozen=True)
class EndpointMass:
    """Mass at one support point, split by stopping boundary."""

    k: int
    success_mass: float
    failure_mass: float

    @property
    def total(self) -> float:
        return self.success_mass + self.failure_mass


@dataclass(frozen=True)
class Moments:
    mean: float
    variance: float


def support(params: SnbParams) -> range:
    """Support of the stopping time, min(s, t) through s + t - 1 inclusive."""
    return range(min(params.s, params.t), params.s + params.t)


def _success_mass(params: SnbParams, k: int) -> float:
    """Mass of paths whose s-th response arrives exactly at draw k."""
    p, s, t = params.p, params.s, params.t
    if not s <= k <= s + t - 1:
        return 0.0
    if p == 0.0:
        return 0.0
    if p == 1.0:
        # q**(k-s) with q = 0: one only when no non-response is needed.
        return 1.0 if k == s else 0.0
    return math.exp(log_choose(k - 1, s - 1) + s * math.log(p) + (k - s) * math.log1p(-p))


def _failure_mass(params: SnbParams, k: int) -> float:
    """Mass of paths whose t-th non-response arrives exactly at draw k."""
    p, s, t = params.p, params.s, params.t
    if not t <= k <= s + t - 1:
        return 0.0
    if p == 1.0:
        return 0.0
    if p == 0.0:
        return 1.0 if k == t else 0.0
    return math.exp(log_choose(k - 1, t - 1) + t * math.log1p(-p) + (k - t) * math.log(p))


def endpoint_split(params: SnbParams, k: int) -> EndpointMass:
    """Mass at k split into its success and failure boundary parts.

    Points outside the support carry an all-zero split rather than an error,
    so callers may sweep any integer range.
    """
    k = operator.index(k)
    return EndpointMass(k, _success_mass(params, k), _failure_mass(params, k))


def pmf(params: SnbParams, k: int) -> float:
    """P[Y = k]; zero outside the support."""
    return endpoint_split(params, k).total


def cdf(params: SnbParams, k: int) -> float:
    """P[Y <= k]."""
    k = operator.index(k)
    lo = min(params.s, params.t)
    if k < lo:
        return 0.0
    acc = 0.0
    for j in range(lo, min(k, params.s + params.t - 1) + 1):
        acc += pmf(params, j)
    return min(acc, 1.0)


def quantile(params: SnbParams, u: float) -> int:
    """Smallest k in the support with P[Y <= k] >= u.

    Args:
        u: Target probability in [0, 1].

    Raises:
        DomainError: If u is outside [0, 1].
    """
    u = float(u)
    if math.isnan(u) or not 0.0 <= u <= 1.0:
        raise DomainError(f"quantile level must lie in [0, 1], got u={u!r}")
    acc = 0.0
    last = min(params.s, params.t)
    for k in support(params):
        mass = pmf(params, k)
        acc += mass
        if mass > 0.0:
            last = k
        if acc >= u:
            return k
    # Float summation can land a hair under u = 1; the top of the support
    # that carries mass is then the correct answer.
    return last


def moments(params: SnbParams) -> Moments:
    """Mean and variance of the stopping time, by direct summation."""
    mean = 0.0
    second = 0.0
    for k in support(params):
        mass = pmf(params, k)
        mean += k * mass
        second += k * k * mass
    return Moments(mean=mean, variance=max(second - mean * mean, 0.0))


def success_probability(params: SnbParams) -> float:
    """Probability the process stops on the response boundary.

    Equals the probability that s + t - 1 independent draws contain at
    least s responses, which is the regularized incomplete beta value
    I_p(s, t).
    """
    if params.p == 0.0:
        return 0.0
    if params.p == 1.0:
        return 1.0
    return 1.0 - reg_inc_beta(params.q, params.t, params.s)


def mgf(params: SnbParams, x: float) -> float:
    """Moment generating function E[exp(x Y)].

    The closed form is

        (p e^x / (1 - q e^x))^s * I_{1 - q e^x}(s, t)
      + (q e^x / (1 - p e^x))^t * I_{1 - p e^x}(t, s)

    valid strictly below min(log(1/p), log(1/q)).

    Raises:
        DegenerateDistributionError: At p = 0 or p = 1, where Y is a point
            mass and the value is just exp(x*t) or exp(x*s).
        DomainError: If x is not strictly inside the convergence domain.
    """
    p, q, s, t = params.p, params.q, params.s, params.t
    if p == 0.0 or p == 1.0:
        point = t if p == 0.0 else s
        raise DegenerateDistributionError(
            f"mgf is degenerate at p={p}: the stopping time is the point mass "
            f"{point}, so E[exp(xY)] = exp({point}x)"
        )
    x = float(x)
    bound = -math.log(max(p, q))
    if math.isnan(x) or x >= bound:
        side = "log(1/p)" if p >= q else "log(1/q)"
        raise DomainError(f"mgf requires x < {side} = {bound!r}, got x={x!r}")
    pe = p * math.exp(x)
    qe = q * math.exp(x)
    term_s = math.exp(s * (math.log(p) + x - math.log1p(-qe))) * reg_inc_beta(1.0 - qe, s, t)
    term_f = math.exp(t * (math.log(q) + x - math.log1p(-pe))) * reg_inc_beta(1.0 - pe, t, s)
    return term_s + term_f


def conditional_remaining(params: SnbParams, s_obs: int, t_obs: int) -> SnbParams:
    """Law of the additional enrollments needed after an interim look.

    Given s_obs responses and t_obs non-responses so far on an unstopped
    path, the remaining enrollment count follows the same family with the
    boundaries reduced by what has been seen.

    Args:
        params: Original design.
        s_obs: Responses observed, 0 <= s_obs < s.
        t_obs: Non-responses observed, 0 <= t_obs < t.

    Returns:
        SnbParams(p, s - s_obs, t - t_obs).

    Raises:
        TrialStoppedError: If either boundary has already been reached.
        DomainError: If an observed count is negative or not an integer.
    """
    s_obs = operator.index(s_obs)
    t_obs = operator.index(t_obs)
    if s_obs < 0 or t_obs < 0:
        raise DomainError(f"observed counts must be nonnegative, got s_obs={s_obs}, t_obs={t_obs}")
    if s_obs >= params.s or t_obs >= params.t:
        raise TrialStoppedError(
            f"interim counts (s_obs={s_obs}, t_obs={t_obs}) already sit on a "
            f"stopping boundary of (s={params.s}, t={params.t})"
        )
    return SnbParams(params.p, params.s - s_obs, params.t - t_obs)
