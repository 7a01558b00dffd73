"""Log-space segment integrals shared by the moment and metric code.

Everything reduces to I(p, lam, u, v) = integral of t^p e^(-lam (t - u)) dt
over [u, v], i.e. the plain power-times-exponential integral with the
e^(-lam u) factor stripped so that far-tail segments never underflow before
their (equally small) density prefactor is applied.  The value is returned as
a natural log; -inf encodes an empty or measure-zero segment and +inf a
divergent one (lam = 0 with v = inf).

Branch layout, chosen so no path subtracts nearly equal incomplete-gamma
values:

  lam = 0            power rule (expm1-stabilized for short segments)
  u = 0              single regularized lower gamma, series-accurate near 0
  short segment      binomial expansion in (t - u)/u, no differences at all
  lam u >= p + 1     scaled upper gammas, log1p-combined (tails separate
                     once the segment starts past the gamma bulk)
  otherwise          lower-gamma difference (benign while the integrand is
                     rising, i.e. below the bulk)
"""

from __future__ import annotations

import math

from .errors import DomainError
from .extreal import INF
from .specfun import ln_gamma, ln_upper_scaled, reg_lower_inc_gamma

# Binomial expansion in (v - u)/u converges geometrically below this ratio.
_SHORT_RATIO = 0.5
_SERIES_TOL = 1.0e-17
_SERIES_MAX_TERMS = 200


def _ln_power_rule(p: float, u: float, v: float) -> float:
    """log of (v^(p+1) - u^(p+1)) / (p+1) for 0 <= u < v <= inf."""
    s = p + 1.0
    if v == INF:
        return INF
    if u == 0.0:
        return s * math.log(v) - math.log(s)
    if v / u < 2.0:
        # v^s - u^s = u^s * expm1(s * log(v/u)), avoids cancellation
        return s * math.log(u) + math.log(math.expm1(s * math.log(v / u))) - math.log(s)
    return math.log((v**s - u**s) / s)


def _ln_binomial_short(p: float, lam: float, u: float, w: float) -> float:
    """log integral over [u, u+w] via expansion of t^p about u, w/u < 1.

    I = u^p * sum_m binom(p, m) u^(-m) * int_0^w tau^m e^(-lam tau) dtau.
    Each tau-integral is m! lam^-(m+1) P(m+1, lam w), assembled in log space
    because lam^-(m+1) alone can overflow for small lam.
    """
    x = lam * w
    # log of int_0^w tau^m e^(-lam tau) dtau for m = 0, 1, ...
    ln_terms = []
    signs = []
    coef = 1.0  # binom(p, m), updated multiplicatively
    for m in range(_SERIES_MAX_TERMS):
        if m > 0:
            coef *= (p - m + 1.0) / m
            if coef == 0.0:  # integer p exhausted the expansion exactly
                break
        ln_g = ln_gamma(m + 1.0) - (m + 1.0) * math.log(lam) + math.log(
            reg_lower_inc_gamma(m + 1.0, x)
        )
        ln_t = math.log(abs(coef)) - m * math.log(u) + ln_g if m > 0 else ln_g
        ln_terms.append(ln_t)
        signs.append(1.0 if coef > 0.0 else -1.0)
        if m > 2 and ln_t < ln_terms[0] + math.log(_SERIES_TOL):
            break
    else:
        raise DomainError("binomial segment expansion did not terminate")
    top = max(ln_terms)
    acc = 0.0
    for ln_t, sg in zip(ln_terms, signs):
        acc += sg * math.exp(ln_t - top)
    if not acc > 0.0:
        raise DomainError("binomial segment expansion lost positivity")
    return p * math.log(u) + top + math.log(acc)


def ln_seg_integral(p: float, lam: float, u: float, v: float) -> float:
    """log of int_u^v t^p e^(-lam (t - u)) dt.

    Domain: p > -1, lam in [0, inf], 0 <= u <= v <= inf, u finite.
    Returns -inf for empty segments and for lam = inf (mass zero under the
    inf * 0 = 0 convention); +inf for the divergent lam = 0, v = inf case.
    """
    if not p > -1.0:
        raise DomainError(f"exponent must exceed -1, got {p!r}")
    if lam < 0.0 or math.isnan(lam):
        raise DomainError(f"rate must lie in [0, inf], got {lam!r}")
    if u < 0.0 or v < u or u == INF or math.isnan(u) or math.isnan(v):
        raise DomainError(f"bad segment [{u!r}, {v!r}]")
    if v == u or lam == INF:
        return -INF
    if lam == 0.0:
        return _ln_power_rule(p, u, v)
    s = p + 1.0
    ln_lam_block = ln_gamma(s) - s * math.log(lam)
    if u == 0.0:
        pv = 1.0 if v == INF else reg_lower_inc_gamma(s, lam * v)
        return ln_lam_block + math.log(pv)
    x_u = lam * u
    if v == INF:
        return ln_lam_block + ln_upper_scaled(s, x_u)
    x_v = lam * v
    w = v - u
    if w / u <= _SHORT_RATIO:
        return _ln_binomial_short(p, lam, u, w)
    if x_u >= s:
        # past the bulk of the gamma weight the upper tails separate fast,
        # so the log1p-combined difference keeps full precision
        delta = x_v - x_u
        ln_qu = ln_upper_scaled(s, x_u)
        ln_qv = ln_upper_scaled(s, x_v)
        return ln_lam_block + ln_qu + math.log1p(-math.exp(ln_qv - ln_qu - delta))
    # below the bulk the integrand x^(s-1) e^(-x) is still rising, which
    # bounds P(s, x_v) - P(s, x_u) from below by (w / u) P(s, x_u): the
    # lower-gamma difference cannot cancel for a long segment
    diff = reg_lower_inc_gamma(s, x_v) - reg_lower_inc_gamma(s, x_u)
    return x_u + ln_lam_block + math.log(diff)
