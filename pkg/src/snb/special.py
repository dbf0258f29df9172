"""Log-scale combinatorics and the regularized incomplete beta function.

Everything in this module is a pure scalar function of its arguments, so
results are cached where that pays off and all functions are safe to call
from multiple threads.

Accuracy notes
--------------
``log_choose`` returns values within a few ulps of the correctly rounded
log binomial coefficient for n up to 10**6.  A plain difference of
``math.lgamma`` calls loses tens of ulps to cancellation once n is large,
so the large-n path evaluates the three log-gamma terms in a private
high-precision context and rounds once at the end.

``reg_inc_beta`` uses the standard continued fraction (modified Lentz
iteration) with the symmetry switch at x = (a + 1) / (a + b + 2).  The
continued fraction itself is well conditioned; the accuracy-limiting step
is the prefactor exp(a*log(x) + b*log1p(-x) - log B(a, b)), whose exponent
is assembled in extended precision for the same reason as above.  Absolute
error stays below 1e-13 for a, b up to 1e4.
"""

from __future__ import annotations

import math
import operator
from functools import lru_cache

import mpmath

from .errors import AccuracyError, DomainError

# Private working context so concurrent callers never observe a mutated
# global mpmath precision.
_MP = mpmath.ctx_mp.MPContext()
_MP.dps = 50

# Largest n evaluated by exact integer arithmetic.  math.comb is exact for
# any n, but its cost grows quickly, and above this point the log-gamma
# path is already correct to well under an ulp.
_EXACT_MAX_N = 20

_CF_MAX_ITER = 300
_CF_EPS = 1e-15
_CF_TINY = 1e-300


@lru_cache(maxsize=262144)
def log_choose(n: int, k: int) -> float:
    """Natural log of the binomial coefficient C(n, k).

    Args:
        n: Population size, a nonnegative integer.
        k: Draw size, an integer with 0 <= k <= n.

    Returns:
        log C(n, k) as a float, exact to a few ulps for n <= 10**6.

    Raises:
        DomainError: If either argument is negative or k exceeds n.
    """
    n = operator.index(n)
    k = operator.index(k)
    if n < 0 or k < 0:
        raise DomainError(f"log_choose requires nonnegative integers, got n={n}, k={k}")
    if k > n:
        raise DomainError(f"log_choose requires k <= n, got n={n}, k={k}")
    if k == 0 or k == n:
        return 0.0
    if n <= _EXACT_MAX_N:
        return math.log(math.comb(n, k))
    val = _MP.loggamma(n + 1) - _MP.loggamma(k + 1) - _MP.loggamma(n - k + 1)
    return float(val)


def log_beta(a: float, b: float) -> float:
    """Natural log of the beta function B(a, b) for a, b > 0.

    Raises:
        DomainError: If either shape is not a positive finite number.
    """
    a = float(a)
    b = float(b)
    if not (a > 0.0 and b > 0.0) or math.isinf(a) or math.isinf(b):
        raise DomainError(f"log_beta requires positive finite shapes, got a={a}, b={b}")
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _beta_cf(x: float, a: float, b: float) -> float:
    """Continued fraction for the incomplete beta function.

    Modified Lentz iteration on the even/odd coefficient pairs.  Valid for
    x below the symmetry switch point, where convergence is fast.
    """
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        # Even step.
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        # Odd step.
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise AccuracyError(
        f"incomplete beta continued fraction did not converge in "
        f"{_CF_MAX_ITER} iterations at x={x}, a={a}, b={b}"
    )


def _cf_prefactor(x: float, a: float, b: float) -> float:
    """exp(a*log(x) + b*log1p(-x) - log B(a, b)), exponent in high precision."""
    xm = _MP.mpf(x)
    exponent = (
        a * _MP.log(xm)
        + b * _MP.log1p(-xm)
        - (_MP.loggamma(a) + _MP.loggamma(b) - _MP.loggamma(a + b))
    )
    return float(_MP.exp(exponent))


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta function I_x(a, b).

    Args:
        x: Evaluation point in [0, 1].
        a: First shape, positive.
        b: Second shape, positive.

    Returns:
        I_x(a, b) in [0, 1].  Exactly 0.0 at x = 0 and 1.0 at x = 1.

    Raises:
        DomainError: If x is outside [0, 1] or a shape is not positive.
    """
    x = float(x)
    a = float(a)
    b = float(b)
    if not (a > 0.0 and b > 0.0) or math.isinf(a) or math.isinf(b):
        raise DomainError(f"reg_inc_beta requires positive finite shapes, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"reg_inc_beta requires 0 <= x <= 1, got x={x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    if x > (a + 1.0) / (a + b + 2.0):
        # The complementary fraction converges faster past the switch point.
        return 1.0 - reg_inc_beta(1.0 - x, b, a)
    return _cf_prefactor(x, a, b) * _beta_cf(x, a, b) / a
