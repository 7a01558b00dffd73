"""Sharp moment-comparison constants for linear forms on the balls of l_q^n.

Everything here is a closed form in gamma functions, evaluated in log space
so large n and p never overflow.  q = inf is a first-class input: each gamma
ratio is replaced by its analytic limit, which turns every formula into the
uniform-on-[-1,1] case rather than a large-q extrapolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .extreal import INF
from .specfun import ln_gamma

__all__ = [
    "ASYMPTOTIC",
    "KhintchineConstants",
    "gamma_p",
    "beta_pqn",
    "y_moment",
    "x_moment",
    "constants_fixed_n",
    "constants_asymptotic",
    "m_n_level",
]

# sentinel for the n field of constants taken over all dimensions at once
ASYMPTOTIC = "asymptotic"

_HALF_LOG_PI = 0.5723649429247001  # log(pi)/2


def _check_p(p: float) -> float:
    p = float(p)
    if not (p > -1.0 and math.isfinite(p)):
        raise DomainError(f"moment exponent must be finite and > -1, got {p!r}")
    if p == 0.0:
        raise DomainError("p = 0 has no 1/p-power normalization; excluded")
    return p


def _check_q(q: float) -> float:
    q = float(q)
    if q == INF:
        return q
    if not (q > 0.0 and math.isfinite(q)):
        raise DomainError(f"ball exponent must be positive or inf, got {q!r}")
    return q


def gamma_p(p: float) -> float:
    """p-th moment norm of a standard Gaussian: sqrt2 (G((p+1)/2)/sqrt pi)^(1/p)."""
    p = _check_p(p)
    return math.sqrt(2.0) * math.exp(
        (ln_gamma((p + 1.0) / 2.0) - _HALF_LOG_PI) / p
    )


def beta_pqn(p: float, q: float, n: int) -> float:
    """The normalizing ratio (G(n/q+1)/G((n+p)/q+1))^(1/p).

    Multiplying the p-norm of a linear form in i.i.d. variables with density
    proportional to e^(-|x|^q) by this factor gives the p-norm of the same
    form on the ball B_q^n.  At q = inf both gamma arguments collapse to 1
    and the ratio is exactly 1.
    """
    p = _check_p(p)
    q = _check_q(q)
    n = _check_n(n)
    if q == INF:
        return 1.0
    return math.exp(
        (ln_gamma(n / q + 1.0) - ln_gamma((n + p) / q + 1.0)) / p
    )


def y_moment(p: float, q: float) -> float:
    """p-th moment norm of the density c_q e^(-|x|^q).

    (G((p+1)/q)/G(1/q))^(1/p); the q = inf limit is the uniform moment
    (p+1)^(-1/p).
    """
    p = _check_p(p)
    q = _check_q(q)
    if q == INF:
        return math.exp(-math.log(p + 1.0) / p)
    return math.exp((ln_gamma((p + 1.0) / q) - ln_gamma(1.0 / q)) / p)


def x_moment(p: float, q: float, n: int) -> float:
    """p-th moment norm of one coordinate of a uniform point on B_q^n."""
    return beta_pqn(p, q, n) * y_moment(p, q)


def _check_n(n) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"dimension must be an integer >= 1, got {n!r}")
    return n


@dataclass(frozen=True)
class KhintchineConstants:
    """The two-sided comparison A ||S||_2 <= ||S||_p <= B ||S||_2.

    n is a dimension or the ASYMPTOTIC sentinel.  sharp_sides lists the
    sides ('A', 'B') that are attained; the remaining side is still a valid
    bound, just not the best possible one.
    """

    p: float
    q: float
    n: object
    A: float
    B: float
    sharp_sides: tuple

    def __post_init__(self):
        if not (self.A <= self.B * (1.0 + 1.0e-12)):
            raise DomainError(
                f"constants out of order: A={self.A!r} > B={self.B!r}"
            )
        for side in self.sharp_sides:
            if side not in ("A", "B"):
                raise DomainError(f"unknown sharp side {side!r}")


def _check_pq_khintchine(p: float, q: float):
    p = _check_p(p)
    q = _check_q(q)
    if p < 1.0:
        raise DomainError(f"comparison constants need p >= 1, got {p!r}")
    if q < 2.0:
        raise DomainError(f"comparison constants need q in [2, inf], got {q!r}")
    return p, q


def constants_fixed_n(p: float, q: float, n: int) -> KhintchineConstants:
    """Dimension-dependent sharp constants for a uniform point on B_q^n.

    The marginal-to-Gaussian route gives one side and the single-coordinate
    ratio the other; which is which swaps at p = 2.  The coordinate-ratio
    side is the attained one: vectors concentrated on one coordinate realize
    it, while the gamma_p side is only approached as the form spreads out.
    """
    p, q = _check_pq_khintchine(p, q)
    n = _check_n(n)
    ratio = x_moment(p, q, n) / x_moment(2.0, q, n)
    spread = (beta_pqn(p, q, n) / beta_pqn(2.0, q, n)) * gamma_p(p)
    if p >= 2.0:
        a, b, sharp = ratio, spread, ("A",)
    else:
        a, b, sharp = spread, ratio, ("B",)
    if p == 2.0:
        a = b = 1.0
    return KhintchineConstants(p=p, q=q, n=n, A=a, B=b, sharp_sides=sharp)


def constants_asymptotic(p: float, q: float) -> KhintchineConstants:
    """Best constants valid in every dimension; both sides are attained.

    The q-dependence cancels in the limit: one side is the Gaussian norm
    gamma_p (central limit theorem along spread-out vectors), the other is
    sqrt3 / (p+1)^(1/p) (a single uniform coordinate), for every q in
    [2, inf].
    """
    p, q = _check_pq_khintchine(p, q)
    uniform = math.sqrt(3.0) * math.exp(-math.log(p + 1.0) / p)
    gauss = gamma_p(p)
    if p >= 2.0:
        a, b = uniform, gauss
    else:
        a, b = gauss, uniform
    if p == 2.0:
        a = b = 1.0
    return KhintchineConstants(
        p=p, q=q, n=ASYMPTOTIC, A=a, B=b, sharp_sides=("A", "B")
    )


def m_n_level(q: float, n: int) -> float:
    """Critical second-moment level separating the two extremal regimes.

    (G(1/q)/G(3/q) * G(n/q+1+2/q)/G(n/q+1))^(q/2), strictly increasing in n;
    algebraically equal to x_moment(2, q, n)^(-q).
    """
    q = float(q)
    if not (q > 0.0 and math.isfinite(q)):
        raise DomainError(f"level formula needs finite q > 0, got {q!r}")
    n = _check_n(n)
    ln_val = (
        ln_gamma(1.0 / q)
        - ln_gamma(3.0 / q)
        + ln_gamma(n / q + 1.0 + 2.0 / q)
        - ln_gamma(n / q + 1.0)
    )
    return math.exp(0.5 * q * ln_val)
