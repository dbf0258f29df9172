"""Brute-force reference implementations.

Two independent routes for checking the closed forms: exhaustive
enumeration of stopped outcome prefixes, and adaptive quadrature for
integrals over the response probability.  Neither route touches the
analytic machinery in :mod:`snb.dist` or :mod:`snb.special`; in
particular no binomial coefficient is ever computed here, path counts
arise purely by walking the outcome tree.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Mapping

import scipy.integrate

from .dist import SnbParams
from .errors import AccuracyError, DomainError, EnumerationLimitError, TrialStoppedError

# Hard ceiling on the depth of the outcome tree (s + t - 1); beyond this
# the walk is too slow to serve as a test oracle.
ENUMERATION_MAX = 24


@dataclass(frozen=True)
class EnumeratedLaw:
    """Law of the enrollment count obtained by exhaustive enumeration.

    Attributes:
        pmf_by_k: Total mass at each support point.
        success_pmf_by_k: The part of each mass from response-boundary stops.
        success_prob: Total mass on the response boundary.
        mean: First moment.
        variance: Second central moment.
    """

    pmf_by_k: Mapping[int, float]
    success_pmf_by_k: Mapping[int, float]
    success_prob: float
    mean: float
    variance: float


@lru_cache(maxsize=4096)
def _stopped_prefix_counts(
    s: int, t: int, ones0: int = 0, zeros0: int = 0
) -> tuple[tuple[int, int, bool, int], ...]:
    """Count stopped outcome prefixes, grouped by shape.

    Walks every extension of the starting state (ones0 responses, zeros0
    non-responses) depth-first, stopping a branch the moment it reaches s
    responses or t non-responses.  Returns tuples
    (extra_draws, extra_ones, stopped_on_success, count).
    """
    counts: dict[tuple[int, int, bool], int] = {}

    def walk(extra: int, ones: int, zeros: int) -> None:
        if ones0 + ones + 1 == s:
            key = (extra + 1, ones + 1, True)
            counts[key] = counts.get(key, 0) + 1
        else:
            walk(extra + 1, ones + 1, zeros)
        if zeros0 + zeros + 1 == t:
            key = (extra + 1, ones, False)
            counts[key] = counts.get(key, 0) + 1
        else:
            walk(extra + 1, ones, zeros + 1)

    walk(0, 0, 0)
    return tuple((k, o, e, c) for (k, o, e), c in sorted(counts.items()))


def _law_from_counts(
    counts: tuple[tuple[int, int, bool, int], ...], p: float, offset: int
) -> EnumeratedLaw:
    q = 1.0 - p
    pmf: dict[int, float] = {}
    success: dict[int, float] = {}
    for extra, ones, is_success, count in counts:
        k = offset + extra
        mass = count * p**ones * q ** (extra - ones)
        pmf[k] = pmf.get(k, 0.0) + mass
        success.setdefault(k, 0.0)
        if is_success:
            success[k] += mass
    mean = sum(k * m for k, m in pmf.items())
    second = sum(k * k * m for k, m in pmf.items())
    return EnumeratedLaw(
        pmf_by_k=dict(sorted(pmf.items())),
        success_pmf_by_k=dict(sorted(success.items())),
        success_prob=sum(success.values()),
        mean=mean,
        variance=max(second - mean * mean, 0.0),
    )


def enumerate_law(params: SnbParams) -> EnumeratedLaw:
    """Exact law by walking every outcome prefix until it stops.

    Raises:
        EnumerationLimitError: If s + t - 1 exceeds ENUMERATION_MAX.
    """
    depth = params.s + params.t - 1
    if depth > ENUMERATION_MAX:
        raise EnumerationLimitError(
            f"enumeration depth s + t - 1 = {depth} exceeds the limit {ENUMERATION_MAX}"
        )
    counts = _stopped_prefix_counts(params.s, params.t)
    return _law_from_counts(counts, params.p, offset=0)


def enumerate_conditional_law(params: SnbParams, s_obs: int, t_obs: int) -> EnumeratedLaw:
    """Law of the additional enrollments after an interim look, by enumeration.

    Continues the original process from the observed counts against the
    original boundaries, so nothing here assumes the reduced-design result
    being checked.

    Raises:
        TrialStoppedError: If the interim counts already reach a boundary.
        DomainError: If an observed count is negative.
        EnumerationLimitError: If the remaining depth exceeds ENUMERATION_MAX.
    """
    if s_obs < 0 or t_obs < 0:
        raise DomainError(f"observed counts must be nonnegative, got s_obs={s_obs}, t_obs={t_obs}")
    if s_obs >= params.s or t_obs >= params.t:
        raise TrialStoppedError(
            f"interim counts (s_obs={s_obs}, t_obs={t_obs}) already sit on a "
            f"stopping boundary of (s={params.s}, t={params.t})"
        )
    depth = (params.s - s_obs) + (params.t - t_obs) - 1
    if depth > ENUMERATION_MAX:
        raise EnumerationLimitError(
            f"remaining enumeration depth {depth} exceeds the limit {ENUMERATION_MAX}"
        )
    counts = _stopped_prefix_counts(params.s, params.t, ones0=s_obs, zeros0=t_obs)
    return _law_from_counts(counts, params.p, offset=0)


def quadrature(integrand: Callable[[float], float], abs_tol: float) -> float:
    """Integrate a function over [0, 1] with an independent cross-check.

    Runs adaptive quadrature twice, once over [0, 1] and once with the
    interval split at 1/2 so the node placement differs, and requires the
    two estimates to agree within abs_tol.

    Args:
        integrand: Function of one float argument; endpoint singularities
            integrable in the beta family are handled.
        abs_tol: Required absolute accuracy, positive.

    Returns:
        The integral estimate.

    Raises:
        DomainError: If abs_tol is not positive.
        AccuracyError: If the two estimates disagree beyond abs_tol.
    """
    abs_tol = float(abs_tol)
    if not abs_tol > 0.0:
        raise DomainError(f"abs_tol must be positive, got {abs_tol!r}")
    eps = min(abs_tol * 1e-2, 1e-10)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.integrate.IntegrationWarning)
        first, _ = scipy.integrate.quad(integrand, 0.0, 1.0, epsabs=eps, epsrel=1e-13, limit=400)
        left, _ = scipy.integrate.quad(integrand, 0.0, 0.5, epsabs=eps / 2, epsrel=1e-13, limit=400)
        right, _ = scipy.integrate.quad(integrand, 0.5, 1.0, epsabs=eps / 2, epsrel=1e-13, limit=400)
    second = left + right
    if abs(first - second) > abs_tol:
        raise AccuracyError(
            f"quadrature estimates disagree: {first!r} vs {second!r} "
            f"(requested abs_tol={abs_tol})"
        )
    return first


def format_law(law: EnumeratedLaw) -> str:
    """Render a law as one 'k probability' pair per line, 17 significant digits."""
    return "".join(f"{k} {law.pmf_by_k[k]:.17g}\n" for k in sorted(law.pmf_by_k))


def write_law(law: EnumeratedLaw, path: str | Path) -> None:
    Path(path).write_text(format_law(law), encoding="ascii")


def read_law(path: str | Path) -> dict[int, float]:
    """Parse a file written by :func:`write_law` back into a pmf mapping."""
    out: dict[int, float] = {}
    for line in Path(path).read_text(encoding="ascii").splitlines():
        if not line.strip():
            continue
        k_text, mass_text = line.split()
        out[int(k_text)] = float(mass_text)
    return out
