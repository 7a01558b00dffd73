"""Moments of log-concave test functions: closed form, oracle, comparison.

The p-th moment here is always the one-sided integral of t^p f(t) over
[0, inf), p > -1.  For piecewise log-affine f this is an exact finite sum of
power-times-exponential segment integrals; moment() takes that route.
moment_quadrature() is the deliberately independent cross-check: adaptive
Gauss-Kronrod over the knot partition, never touching the incomplete-gamma
code, so the two paths share no failure mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ._kernels import ln_seg_integral
from .core import CONSTANT_ONE, fn_equal, jump_form, segments
from .errors import Diverges, DomainError, NonConvergence
from .extreal import INF, is_ext
from .specfun import ln_gamma

_QUAD_MAX_DEPTH = 60
_TAIL_CUT = 1.0e-18


@dataclass(frozen=True)
class ExponentTuple:
    """Strictly distinct moment exponents, each > -1, in prescribed order."""

    exponents: tuple

    def __post_init__(self):
        exps = tuple(float(p) for p in self.exponents)
        object.__setattr__(self, "exponents", exps)
        if not exps:
            raise DomainError("at least one exponent is required")
        for p in exps:
            if not (p > -1.0 and math.isfinite(p)):
                raise DomainError(f"exponents must be finite and > -1, got {p!r}")
        if len(set(exps)) != len(exps):
            raise DomainError(f"exponents must be distinct, got {exps}")

    def __len__(self):
        return len(self.exponents)

    def __iter__(self):
        return iter(self.exponents)

    def __getitem__(self, i):
        return self.exponents[i]

    def prefix(self, n: int) -> "ExponentTuple":
        return ExponentTuple(self.exponents[:n])

    def rank_of_last(self) -> int:
        """1-based position of the final exponent in the increasing rearrangement."""
        last = self.exponents[-1]
        return 1 + sum(1 for p in self.exponents if p < last)

    @property
    def lo(self) -> float:
        return min(self.exponents)

    @property
    def hi(self) -> float:
        return max(self.exponents)


@dataclass(frozen=True)
class MomentVector:
    """Moment values aligned with an ExponentTuple.

    All entries share finiteness: the only function with an infinite moment
    is the constant one (every moment infinite), and the only one with a zero
    moment is the point indicator (every moment zero).  Mixed vectors are
    rejected at construction.
    """

    values: tuple

    def __post_init__(self):
        vals = tuple(float(m) for m in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise DomainError("empty moment vector")
        for m in vals:
            if not is_ext(m):
                raise DomainError(f"moments must lie in [0, inf], got {m!r}")
        if any(m == INF for m in vals) and not all(m == INF for m in vals):
            raise DomainError("moments are either all finite or all infinite")
        if any(m == 0.0 for m in vals) and not all(m == 0.0 for m in vals):
            raise DomainError("moments are either all positive or all zero")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def degenerate(self) -> bool:
        return self.values[0] in (0.0, INF)


def power_exp_integral(p: float, lam: float, u: float, v: float) -> float:
    """int_u^v t^p e^(-lam t) dt for p > -1, lam in [0, inf], 0 <= u <= v.

    Raises Diverges for lam = 0, v = inf (the integrand is then a pure power).
    """
    ln_val = ln_seg_integral(p, lam, u, v)
    if ln_val == INF:
        raise Diverges("power integral with no exponential decay diverges")
    if ln_val == -INF:
        return 0.0
    if lam > 0.0 and lam < INF:
        ln_val -= lam * u
    return math.exp(ln_val)


def moment(f, p: float) -> float:
    """p-th one-sided moment of f, closed form.  inf for the constant one."""
    total = 0.0
    for seg in segments(f):
        ln_val = -seg.v0 + ln_seg_integral(p, seg.lam, seg.start, seg.end)
        if ln_val == INF:
            return INF
        total += math.exp(ln_val)
    return total


def moment_map(f, p: ExponentTuple) -> MomentVector:
    """All moments of f against the exponent tuple, closed form."""
    if not isinstance(p, ExponentTuple):
        p = ExponentTuple(tuple(p))
    return MomentVector(tuple(moment(f, pe) for pe in p))


# ---------------------------------------------------------------------------
# quadrature oracle

# Gauss 7 / Kronrod 15 nodes and weights (positive half, QUADPACK values).
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


def _gk15(fn, a: float, b: float):
    """(kronrod, |kronrod - gauss|) on [a, b]."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = fn(c)
    kron = _WGK[7] * fc
    gauss = _WG[3] * fc
    for i in range(7):
        x = h * _XGK[i]
        fsum = fn(c - x) + fn(c + x)
        kron += _WGK[i] * fsum
        if i % 2 == 1:
            gauss += _WG[i // 2] * fsum
    return kron * h, abs((kron - gauss) * h)


def _adaptive_gk(fn, a: float, b: float, tol: float, depth: int = 0) -> float:
    val, err = _gk15(fn, a, b)
    # second disjunct: the estimate has hit the rounding floor of the local
    # value, so further bisection only redistributes noise
    if err <= tol or err <= 1.0e-15 * abs(val) or b - a < 1.0e-300:
        return val
    if depth >= _QUAD_MAX_DEPTH:
        raise NonConvergence(
            f"adaptive quadrature exceeded {_QUAD_MAX_DEPTH} levels on "
            f"[{a}, {b}] (err ~ {err:.3e}, tol {tol:.3e})"
        )
    mid = 0.5 * (a + b)
    return _adaptive_gk(fn, a, mid, 0.5 * tol, depth + 1) + _adaptive_gk(
        fn, mid, b, 0.5 * tol, depth + 1
    )


def moment_quadrature(f, p: float, rel_tol: float = 1.0e-11) -> float:
    """p-th moment by adaptive Gauss-Kronrod; independent of the closed form.

    Panels follow the knot partition.  When p < 0 the first panel uses the
    substitution t = y^(1/(p+1)), which absorbs the t^p singularity exactly.
    The tail beyond the last knot is summed over doubling panels until its
    contribution falls below 1e-18 of the running total.
    """
    if not p > -1.0:
        raise DomainError(f"exponent must exceed -1, got {p!r}")
    segs = segments(f)
    if not segs:
        return 0.0  # support is {0}
    if segs[-1].end == INF and segs[-1].lam == 0.0:
        raise Diverges("constant function has no finite moments")
    from .core import eval_fn

    def integrand(t):
        return t**p * eval_fn(f, t)

    jumps, cutoff = jump_form(f)
    points = [0.0] + [b for b, _ in jumps]
    if cutoff < INF:
        points.append(cutoff)
    points = sorted(set(points))

    # a working scale so the very first panel has a sensible tolerance
    scale_guess = math.exp(
        -segs[0].v0 + ln_seg_integral(p, segs[0].lam, segs[0].start, segs[0].end)
    )
    total = 0.0
    first_hi = points[1] if len(points) > 1 else None
    if first_hi is None:
        # single unbounded segment: seed the panel at the decay scale
        first_hi = 1.0 / segs[-1].lam
        points.append(first_hi)

    for a, b in zip(points, points[1:]):
        tol = rel_tol * max(abs(total), scale_guess)
        if a == 0.0 and p < 1.0 and p != 0.0:
            # t = y^alpha turns t^p dt into alpha y^k dy with k integer, so
            # the fractional-power corner (infinite value for p < 0, infinite
            # derivative for 0 < p < 1) disappears from the integrand
            k = 0.0 if p < 0.0 else 1.0
            alpha = (k + 1.0) / (p + 1.0)
            top = b ** (1.0 / alpha)

            def sub_integrand(y, _k=k, _a=alpha):
                return y**_k * eval_fn(f, y**_a)

            total += alpha * _adaptive_gk(sub_integrand, 0.0, top, tol / alpha)
        else:
            total += _adaptive_gk(integrand, a, b, tol)

    if cutoff == INF:
        t0 = points[-1]
        width = max(t0, 1.0 / segs[-1].lam)
        for _ in range(200):
            piece = _adaptive_gk(integrand, t0, t0 + width,
                                 rel_tol * max(abs(total), scale_guess))
            total += piece
            if abs(piece) < _TAIL_CUT * max(abs(total), 1.0e-300):
                break
            t0 += width
            width *= 2.0
        else:
            raise NonConvergence("tail panels failed to decay")
    return total


# ---------------------------------------------------------------------------
# moment comparison constant

def moment_ratio_bound(p: float, q: float) -> float:
    """Best constant C with m_p(f)^(1/(p+1)) <= C * m_q(f)^(1/(q+1)).

    The maximum of the power branch (attained by indicators) and the gamma
    branch (attained by decaying exponentials).
    """
    if not (p > -1.0 and q > -1.0):
        raise DomainError("comparison exponents must exceed -1")
    power_branch = (q + 1.0) ** (1.0 / (q + 1.0)) / (p + 1.0) ** (1.0 / (p + 1.0))
    gamma_branch = math.exp(
        ln_gamma(p + 1.0) / (p + 1.0) - ln_gamma(q + 1.0) / (q + 1.0)
    )
    return max(power_branch, gamma_branch)


def moment_ratio_argmax(p: float, q: float) -> str:
    """Which extremal attains moment_ratio_bound: 'indicator' or 'exponential'."""
    power_branch = (q + 1.0) ** (1.0 / (q + 1.0)) / (p + 1.0) ** (1.0 / (p + 1.0))
    gamma_branch = math.exp(
        ln_gamma(p + 1.0) / (p + 1.0) - ln_gamma(q + 1.0) / (q + 1.0)
    )
    return "indicator" if power_branch >= gamma_branch else "exponential"


def is_constant_one(f) -> bool:
    return fn_equal(f, CONSTANT_ONE)
