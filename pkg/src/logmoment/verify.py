"""Numerical cross-checks for the comparison theorems behind the constants.

The deterministic route discretizes each factor density on a shared uniform
grid, convolves directly, and integrates |x|^p against the result.  Uniform
factors are stored as cell averages; a stack of grid-aligned uniforms then
carries a clean quadratic error in the step (the discrete convolution acts
like a width-h mollifier), which one halved-step extrapolation removes, so
those pipelines come out near roundoff.  Smooth factors are sampled
pointwise and the moment integral switches to Simpson away from the origin,
keeping the error well under the advertised tolerance.  The Monte Carlo
route draws from the ball via gamma normalization.  Both are written so
that a fixed seed and grid give bitwise-identical results regardless of how
the work is split.

Every check returns a TestVerdict whose margin is the signed distance to
violation, in units of the check's own tolerance (or combined standard error
for sampling checks).  A verdict passes when the margin is above -1, i.e.
when any violation is within one tolerance unit and therefore noise.  The
``direction="reversed"`` knob flips the asserted inequality so a harness can
confirm the check actually bites.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .chebyshev import sign_changes
from .core import segments, support_bound
from .errors import DomainError, GridTooCoarse
from .extreal import INF
from .khintchine import beta_pqn, gamma_p, y_moment
from .moments import moment
from .specfun import ln_gamma

__all__ = [
    "GridSpec",
    "GridDensity",
    "McEstimate",
    "TestVerdict",
    "y_density",
    "simple_fn_density",
    "convolve",
    "grid_abs_moment",
    "linear_form_moment",
    "check_edge",
    "check_gauss_bound",
    "check_monotone_psi",
    "mc_ball_sample",
    "mc_identity_check",
    "check_h_convexity",
    "check_phi_criterion",
    "check_schur_step",
    "check_uniform_small_p",
    "check_density_interlace",
    "default_suite",
]

# -ln of the relative level at which a density tail is cut
_LN_TAIL = 36.85
_MASS_DRIFT = 1.0e-6
_MARGIN_CAP = 1.0e6
# flat relative quadrature tolerances: closed forms, extrapolated aligned
# uniform stacks, all-smooth pipelines, and stacks with a misaligned jump
_QTOL_EXACT = 1.0e-12
_QTOL_ALIGNED = 1.0e-9
_QTOL_SMOOTH = 1.0e-7
_QTOL_MIXED = 5.0e-6
_INNER_CELLS = 8
_MC_CHUNK = 1 << 17
_DEFAULT_SEED = 20260825


@dataclass(frozen=True)
class GridSpec:
    """Resolution knobs for the convolution pipeline.

    step=None derives a common step so every factor gets at least
    min_points samples across its support, cut where the density falls
    below ``tail`` relative to its peak.
    """

    step: float | None = None
    min_points: int = 2001
    tail: float = 1.0e-16


@dataclass(frozen=True, eq=False)
class GridDensity:
    """A symmetric density sampled on a uniform grid centered at 0.

    values are normalized so that step * sum(values) == 1 to roundoff;
    mass_defect records the drift that was removed.  poly_degree is the
    local polynomial degree when the density is exactly piecewise
    polynomial with breakpoints on the grid (0 for an aligned uniform,
    additive-plus-one under convolution), or None for generic densities.
    smooth marks stacks built only from analytic factors, whose quadrature
    error is far below that of anything carrying a misaligned jump.
    """

    origin: float
    step: float
    values: np.ndarray
    total_mass: float
    mass_defect: float = 0.0
    poly_degree: int | None = None
    smooth: bool = False

    def __post_init__(self):
        n = len(self.values)
        if n % 2 != 1:
            raise DomainError("density grid must have odd length")
        if abs(self.origin + 0.5 * self.step * (n - 1)) > 1.0e-9 * self.step * n:
            raise DomainError("density grid must be symmetric about 0")


def _radius(q: float, scale: float, tail: float) -> float:
    if q == INF:
        return scale
    return scale * math.pow(-math.log(tail), 1.0 / q)


def _common_step(radii, uniform_scales, spec: GridSpec) -> float:
    """Shared step: resolution from the narrowest factor, then aligned so
    uniform edges land on grid nodes.

    When the uniform scales have commensurable ratios a nearby step puts
    every edge on the grid at once (searched over a bounded range of
    divisors); otherwise only the smallest scale is aligned.
    """
    if spec.step is not None:
        if not spec.step > 0.0:
            raise DomainError(f"grid step must be positive, got {spec.step!r}")
        return spec.step
    if spec.min_points < 32:
        raise DomainError("min_points below 32 cannot resolve a density")
    h = min(2.0 * r / (spec.min_points - 1) for r in radii)
    if not uniform_scales:
        return h
    s = min(uniform_scales)
    k0 = math.ceil(s / h - 1.0e-12)
    others = sorted(set(x / s for x in uniform_scales if x != s))
    for k in range(k0, k0 + 4000):
        if all(abs(r * k - round(r * k)) < 1.0e-9 for r in others):
            return s / k
    return s / k0


def _finish_density(origin, h, vals, defect, deg, smooth=False) -> GridDensity:
    mass = float(vals.sum()) * h
    drift = mass - 1.0 + defect
    if abs(drift) > _MASS_DRIFT:
        raise GridTooCoarse(
            f"density mass drifted to {1.0 + drift!r}; refine the grid"
        )
    vals = vals / mass
    return GridDensity(
        origin=origin,
        step=h,
        values=vals,
        total_mass=float(vals.sum()) * h,
        mass_defect=drift,
        poly_degree=deg,
        smooth=smooth,
    )


def _uniform_density(scale: float, h: float) -> GridDensity:
    m = int(math.ceil(scale / h - 1.0e-9))
    xs = np.arange(-m, m + 1) * h
    # cell averages of the indicator: exact mass, and exact half-values at
    # the edges when the grid is aligned
    lo = np.clip(xs - 0.5 * h, -scale, scale)
    hi = np.clip(xs + 0.5 * h, -scale, scale)
    vals = np.maximum(hi - lo, 0.0) / (2.0 * scale * h)
    aligned = abs(scale / h - round(scale / h)) < 1.0e-9
    return _finish_density(-m * h, h, vals, 0.0, 0 if aligned else None)


def y_density(q: float, scale: float = 1.0, spec: GridSpec | None = None) -> GridDensity:
    """Density of scale * Y on a uniform grid, Y having density c_q e^{-|x|^q}.

    q = inf is the uniform distribution on [-scale, scale].
    """
    q = float(q)
    if not (q > 0.0):
        raise DomainError(f"density exponent must be positive, got {q!r}")
    scale = float(scale)
    if not (scale > 0.0 and math.isfinite(scale)):
        raise DomainError(f"density scale must be positive finite, got {scale!r}")
    spec = spec or GridSpec()
    h = _common_step([_radius(q, scale, spec.tail)], [scale] if q == INF else [], spec)
    if q == INF:
        return _uniform_density(scale, h)
    r = _radius(q, scale, spec.tail)
    m = int(math.ceil(r / h - 1.0e-9))
    xs = np.arange(0, m + 1) * h
    ln_c = math.log(q / 2.0) - ln_gamma(1.0 / q) - math.log(scale)
    half = np.exp(ln_c - (xs / scale) ** q)
    vals = np.concatenate([half[:0:-1], half])
    return _finish_density(-m * h, h, vals, 0.0, None, smooth=True)


def _simple_fn_radius(fn) -> float:
    segs = segments(fn)
    if not segs:
        raise DomainError("cannot build a density from an empty function")
    cut = support_bound(fn)
    if cut != INF:
        return cut
    last = segs[-1]
    if not last.lam > 0.0:
        raise DomainError("function does not decay; no density exists")
    return last.start + (_LN_TAIL - last.v0) / last.lam


def simple_fn_density(fn, h: float) -> GridDensity:
    """The even extension of a simple log-concave function (or a potential
    spec), normalized to a probability density and cell-averaged on a grid
    of step h.

    Cell averages are computed exactly from the affine pieces of the
    potential, so the discrete mass equals the true mass up to the tail cut.
    """
    segs = segments(fn)
    r = _simple_fn_radius(fn)
    m = int(math.ceil(r / h - 1.0e-9))
    xs = np.arange(0, m + 1) * h
    cell = np.zeros(m + 1)
    for seg in segs:
        end = min(seg.end, r + h)
        lo = np.clip(xs - 0.5 * h, seg.start, end)
        hi = np.clip(xs + 0.5 * h, seg.start, end)
        w = hi - lo
        live = w > 0.0
        if not np.any(live):
            continue
        if seg.lam == 0.0:
            cell[live] += math.exp(-seg.v0) * w[live]
        else:
            a = np.exp(-(seg.v0 + seg.lam * (lo[live] - seg.start)))
            b = np.exp(-(seg.v0 + seg.lam * (hi[live] - seg.start)))
            cell[live] += (a - b) / seg.lam
    half = cell / h
    half[0] *= 2.0
    c = 0.5 / moment(fn, 0.0)
    vals = np.concatenate([half[:0:-1], half]) * c
    return _finish_density(-m * h, h, vals, 0.0, None)


def convolve(f: GridDensity, g: GridDensity) -> GridDensity:
    """Density of the sum of two independent variables, by direct discrete
    convolution on the shared grid."""
    if abs(f.step - g.step) > 1.0e-12 * f.step:
        raise DomainError("convolution factors must share a grid step")
    vals = np.convolve(f.values, g.values) * f.step
    deg = None
    if f.poly_degree is not None and g.poly_degree is not None:
        deg = f.poly_degree + g.poly_degree + 1
    return _finish_density(
        f.origin + g.origin, f.step, vals, f.mass_defect + g.mass_defect, deg,
        smooth=f.smooth and g.smooth,
    )


# ---------------------------------------------------------------------------
# moment of |x| against a grid density

def _cell_power(p: float, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Integral of x^p over [u, v] cellwise, stable for v - u << u."""
    s = p + 1.0
    out = np.empty_like(u)
    zero = u == 0.0
    out[zero] = v[zero] ** s / s
    uz = u[~zero]
    out[~zero] = uz**s * np.expm1(s * np.log1p((v[~zero] - uz) / uz)) / s
    return out


def _exact_cells(p: float, xs, fv, lo: int, hi: int) -> float:
    """Integral of x^p times the piecewise-linear interpolant over cells
    lo..hi-1 of the positive half grid."""
    u, v = xs[lo:hi], xs[lo + 1 : hi + 1]
    fu, fw = fv[lo:hi], fv[lo + 1 : hi + 1]
    h = v[0] - u[0]
    ip = _cell_power(p, u, v)
    ip1 = _cell_power(p + 1.0, u, v)
    slope = (fw - fu) / h
    return float(np.sum(fu * ip + slope * (ip1 - u * ip)))


def grid_abs_moment(d: GridDensity, p: float) -> float:
    """E|X|^p for X distributed by the grid density; p > -1.

    Piecewise-linear densities integrate exactly.  Otherwise the cells
    nearest 0 (where |x|^p can be singular or kinked) use the exact
    power-law rule and the rest composite Simpson.
    """
    p = float(p)
    if not (p > -1.0 and math.isfinite(p)):
        raise DomainError(f"moment exponent must be finite and > -1, got {p!r}")
    if p == 0.0:
        return d.total_mass
    n = len(d.values)
    c = n // 2
    fv = d.values[c:]
    xs = np.arange(0, c + 1) * d.step
    if d.poly_degree is not None and d.poly_degree <= 1:
        return 2.0 * _exact_cells(p, xs, fv, 0, c)
    inner = min(_INNER_CELLS, c)
    if (c - inner) % 2 == 1:
        inner += 1
    total = _exact_cells(p, xs, fv, 0, inner)
    if c > inner:
        g = xs[inner:] ** p * fv[inner:]
        total += float(
            d.step / 3.0 * (g[0] + g[-1] + 4.0 * g[1::2].sum() + 2.0 * g[2:-1:2].sum())
        )
    return 2.0 * total


def _form_density(q: float, coeffs, spec: GridSpec) -> GridDensity:
    radii = [_radius(q, s, spec.tail) for s in coeffs]
    uni = list(coeffs) if q == INF else []
    h = _common_step(radii, uni, spec)
    inner = GridSpec(step=h, min_points=spec.min_points, tail=spec.tail)
    out = y_density(q, coeffs[0], inner)
    for s in coeffs[1:]:
        out = convolve(out, y_density(q, s, inner))
    return out


def _pmoment_refined(build, p: float):
    """p-moment of a convolved density with step-halving error control.

    ``build(step)`` constructs the density (step=None means the default).
    When the result is a stack of grid-aligned uniforms its moment error is
    a clean quadratic in the step, so one halved-step rebuild and a
    Richardson combination push it to roundoff.  Anything smooth or
    misaligned skips the rebuild and keeps the plain result with the
    corresponding tolerance.  Returns (p-moment, relative tolerance,
    density at the original step).
    """
    dens = build(None)
    m = grid_abs_moment(dens, p)
    if dens.poly_degree is None:
        return m, _qtol(dens), dens
    fine = build(dens.step / 2.0)
    m_fine = grid_abs_moment(fine, p)
    return (4.0 * m_fine - m) / 3.0, _qtol(dens), dens


def _check_coeffs(a) -> tuple:
    out = tuple(float(v) for v in a)
    if not out:
        raise DomainError("coefficient vector is empty")
    if any(v == 0.0 or not math.isfinite(v) for v in out):
        raise DomainError("coefficients must be nonzero and finite")
    return tuple(abs(v) for v in out)


def linear_form_moment(q: float, a, p: float, spec: GridSpec | None = None) -> float:
    """p-norm of sum(a_i Y_i) for i.i.d. Y with density c_q e^{-|x|^q}."""
    coeffs = _check_coeffs(a)
    p = float(p)
    if p == 0.0 or not (p > -1.0 and math.isfinite(p)):
        raise DomainError(f"norm exponent must be in (-1, 0) or (0, inf), got {p!r}")
    if len(coeffs) == 1:
        return coeffs[0] * y_moment(p, q)
    base = spec or GridSpec()

    def build(step):
        return _form_density(q, coeffs, base if step is None else replace(base, step=step))

    m, _, _ = _pmoment_refined(build, p)
    return math.pow(m, 1.0 / p)


# ---------------------------------------------------------------------------
# verdicts

@dataclass(frozen=True)
class TestVerdict:
    """Outcome of one numerical check.

    margin is the signed distance to violation in tolerance units (or
    combined standard errors); pass requires margin >= -1.
    """

    name: str
    passed: bool
    margin: float
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.passed != (self.margin >= -1.0):
            raise DomainError("verdict pass flag inconsistent with its margin")

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "margin": self.margin,
            "detail": dict(self.detail),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict())


def _verdict(name: str, margin: float, detail: dict) -> TestVerdict:
    margin = float(max(-_MARGIN_CAP, min(_MARGIN_CAP, margin)))
    return TestVerdict(name=name, passed=margin >= -1.0, margin=margin, detail=detail)


def _direction_sign(direction: str) -> float:
    if direction == "auto":
        return 1.0
    if direction == "reversed":
        return -1.0
    raise DomainError(f"direction must be 'auto' or 'reversed', got {direction!r}")


def _qtol(*densities) -> float:
    tol = _QTOL_ALIGNED
    for d in densities:
        if d.poly_degree is None:
            tol = max(tol, _QTOL_SMOOTH if d.smooth else _QTOL_MIXED)
        tol = max(tol, 10.0 * abs(d.mass_defect))
    return tol


def _check_pq_edge(q: float, p: float):
    q = float(q)
    p = float(p)
    if q != INF and not (2.0 <= q < INF):
        raise DomainError(f"comparison needs q in [2, inf], got {q!r}")
    if not (p >= 1.0 and math.isfinite(p)):
        raise DomainError(f"comparison needs finite p >= 1, got {p!r}")
    return q, p


def check_edge(q: float, a, p: float, spec: GridSpec | None = None,
               direction: str = "auto") -> TestVerdict:
    """Single-variable edge bound: for a unit vector a and p >= 2 the form
    sum(a_i Y_i) has p-norm at least that of one Y (reversed on [1, 2])."""
    q, p = _check_pq_edge(q, p)
    coeffs = _check_coeffs(a)
    if abs(math.fsum(v * v for v in coeffs) - 1.0) > 1.0e-9:
        raise DomainError("edge bound needs a unit coefficient vector")
    spec = spec or GridSpec()
    rhs = y_moment(p, q)
    if len(coeffs) == 1:
        lhs, tol = rhs, _QTOL_EXACT
    else:
        m, tol, _ = _pmoment_refined(lambda st: _form_density(
            q, coeffs, spec if st is None else replace(spec, step=st)), p)
        lhs = math.pow(m, 1.0 / p)
    sgn = (1.0 if p >= 2.0 else -1.0) * _direction_sign(direction)
    margin = sgn * (lhs - rhs) / (tol * max(lhs, rhs))
    name = f"edge[q={q:g},p={p:g},n={len(coeffs)}]"
    if direction == "reversed":
        name += "!rev"
    return _verdict(name, margin, {"form": lhs, "single": rhs, "rel_tol": tol})


def check_gauss_bound(q: float, a, p: float, spec: GridSpec | None = None,
                      direction: str = "auto") -> TestVerdict:
    """Gaussian-constant bound: ||sum a_i Y_i||_p <= gamma_p ||sum a_i Y_i||_2
    for p >= 2 (reversed on [1, 2]); any real coefficients."""
    q, p = _check_pq_edge(q, p)
    coeffs = _check_coeffs(a)
    spec = spec or GridSpec()
    l2 = math.sqrt(math.fsum(v * v for v in coeffs)) * y_moment(2.0, q)
    rhs = gamma_p(p) * l2
    if len(coeffs) == 1:
        lhs, tol = coeffs[0] * y_moment(p, q), _QTOL_EXACT
    else:
        m, tol, _ = _pmoment_refined(lambda st: _form_density(
            q, coeffs, spec if st is None else replace(spec, step=st)), p)
        lhs = math.pow(m, 1.0 / p)
    sgn = (-1.0 if p >= 2.0 else 1.0) * _direction_sign(direction)
    margin = sgn * (lhs - rhs) / (tol * max(lhs, rhs))
    name = f"gauss[q={q:g},p={p:g},n={len(coeffs)}]"
    if direction == "reversed":
        name += "!rev"
    return _verdict(name, margin, {"form": lhs, "gauss_side": rhs, "rel_tol": tol})


def check_monotone_psi(q_grid, a, p: float, which: int,
                       spec: GridSpec | None = None,
                       direction: str = "auto") -> TestVerdict:
    """Monotonicity in q of E|sum a_i Y_i|^p with every factor carrying the
    same q and normalized to unit p-th moment (which=1) or unit second
    moment (which=2).

    which=1 is nondecreasing for p >= 2 and nonincreasing on [1, 2];
    which=2 the other way around.  At p = 2 both are constant and the
    verdict asserts flatness instead.
    """
    if which not in (1, 2):
        raise DomainError(f"which must be 1 or 2, got {which!r}")
    p = float(p)
    if not (p >= 1.0 and math.isfinite(p)):
        raise DomainError(f"monotonicity holds for finite p >= 1, got {p!r}")
    qs = [float(q) for q in q_grid]
    if len(qs) < 2 or any(u >= v for u, v in zip(qs, qs[1:])):
        raise DomainError("q_grid must be strictly increasing with >= 2 entries")
    coeffs = _check_coeffs(a)
    spec = spec or GridSpec()
    norm_p = p if which == 1 else 2.0
    vals, tol = [], _QTOL_EXACT
    for q in qs:
        if not q > 0.0:
            raise DomainError(f"q_grid entries must be positive, got {q!r}")
        scaled = tuple(v / y_moment(norm_p, q) for v in coeffs)
        if len(scaled) == 1:
            vals.append(y_moment(p, q) ** p * scaled[0] ** p)
            continue
        m, q_tol, _ = _pmoment_refined(lambda st, q=q, scaled=scaled: _form_density(
            q, scaled, spec if st is None else replace(spec, step=st)), p)
        vals.append(m)
        tol = max(tol, q_tol)
    scale = tol * max(abs(v) for v in vals)
    diffs = [v - u for u, v in zip(vals, vals[1:])]
    name = f"psi{which}[p={p:g},n={len(coeffs)},q={qs[0]:g}..{qs[-1]:g}]"
    if direction == "reversed":
        name += "!rev"
    detail = {"values": vals, "rel_tol": tol}
    if p == 2.0:
        margin = 3.0 - max(abs(dv) for dv in diffs) / scale
        return _verdict(name, margin, detail)
    up = (which == 1) == (p > 2.0)
    sgn = (1.0 if up else -1.0) * _direction_sign(direction)
    margin = min(sgn * dv / scale for dv in diffs)
    return _verdict(name, margin, detail)


# ---------------------------------------------------------------------------
# Monte Carlo on the ball

@dataclass(frozen=True)
class McEstimate:
    """Sample mean with its standard error; reproducible from the seed."""

    mean: float
    std_err: float
    n_samples: int
    seed: int


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _ball_chunk(rng, q: float, n: int, m: int) -> np.ndarray:
    # draw order is fixed (radii, signs, exponential) so estimates never
    # depend on how the chunks are scheduled
    if q == INF:
        return rng.uniform(-1.0, 1.0, (m, n))
    w = rng.standard_gamma(1.0 / q, (m, n))
    signs = np.where(rng.random((m, n)) < 0.5, -1.0, 1.0)
    e = rng.standard_exponential(m)
    y = np.power(w, 1.0 / q) * signs
    return y / np.power(w.sum(axis=1) + e, 1.0 / q)[:, None]


def _check_ball_args(q: float, n: int, count: int):
    q = float(q)
    if q != INF and not (0.0 < q < INF):
        raise DomainError(f"ball exponent must be positive or inf, got {q!r}")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"dimension must be an integer >= 1, got {n!r}")
    if not isinstance(count, int) or count < 1:
        raise DomainError(f"sample count must be a positive integer, got {count!r}")
    return q


def mc_ball_sample(q: float, n: int, count: int, seed: int = _DEFAULT_SEED) -> np.ndarray:
    """count points uniform on the unit ball of l_q^n, shape (count, n).

    Coordinates come from i.i.d. draws with density c_q e^{-|y|^q}
    normalized by (sum |y_i|^q + E)^{1/q} with an independent standard
    exponential E; for q = inf the coordinates are independent uniforms.
    """
    q = _check_ball_args(q, n, count)
    out = np.empty((count, n))
    pos = 0
    for k in range(0, (count + _MC_CHUNK - 1) // _MC_CHUNK):
        m = min(_MC_CHUNK, count - pos)
        out[pos : pos + m] = _ball_chunk(_chunk_rng(seed, k), q, n, m)
        pos += m
    return out


def _mc_form_pmoment(p: float, q: float, n: int, a, count: int, seed: int) -> McEstimate:
    coeffs = np.asarray([float(v) for v in a])
    sums, squares = [], []
    pos = 0
    for k in range(0, (count + _MC_CHUNK - 1) // _MC_CHUNK):
        m = min(_MC_CHUNK, count - pos)
        x = _ball_chunk(_chunk_rng(seed, k), q, n, m)
        v = np.abs(x @ coeffs) ** p
        sums.append(float(v.sum()))
        squares.append(float(np.square(v).sum()))
        pos += m
    mean = math.fsum(sums) / count
    var = max(math.fsum(squares) / count - mean * mean, 0.0)
    return McEstimate(mean=mean, std_err=math.sqrt(var / count), n_samples=count, seed=seed)


def mc_identity_check(p: float, q: float, n: int, a, count: int = 1_000_000,
                      seed: int = _DEFAULT_SEED, spec: GridSpec | None = None,
                      reference_scale: float = 1.0) -> TestVerdict:
    """Sampled E|sum a_i X_i|^p on the ball against the exact reduction to
    independent factors, beta_{p,q,n}^p E|sum a_i Y_i|^p.

    reference_scale multiplies the exact side; values other than 1 are for
    negative controls.
    """
    q = _check_ball_args(q, n, count)
    p = float(p)
    if p == 0.0 or not (p > -0.5 and math.isfinite(p)):
        raise DomainError(f"sampled exponent must be > -1/2 and nonzero, got {p!r}")
    coeffs = [float(v) for v in a]
    if len(coeffs) != n or any(not math.isfinite(v) for v in coeffs):
        raise DomainError("coefficients must be n finite reals")
    if all(v == 0.0 for v in coeffs):
        raise DomainError("coefficient vector is zero")
    est = _mc_form_pmoment(p, q, n, coeffs, count, seed)
    live = [v for v in coeffs if v != 0.0]
    ref = (beta_pqn(p, q, n) * linear_form_moment(q, live, p, spec)) ** p
    ref *= float(reference_scale)
    sigma = math.sqrt(est.std_err**2 + (_QTOL_SMOOTH * ref) ** 2)
    margin = 3.0 - abs(est.mean - ref) / sigma
    name = f"mc-identity[p={p:g},q={q:g},n={n}]"
    detail = {
        "estimate": est.mean,
        "std_err": est.std_err,
        "reference": ref,
        "n_samples": count,
        "seed": seed,
    }
    return _verdict(name, margin, detail)


# ---------------------------------------------------------------------------
# convexity checks by second differences

def _second_diff_margin(fn, centers, rel_step: float, expected: int,
                        noise: float) -> float:
    """Worst signed second difference over per-center arithmetic stencils,
    in units of the cancellation noise; expected 0 asserts flatness."""
    worst = math.inf
    flat = -math.inf
    for x in centers:
        s = rel_step * x
        f0, f1, f2 = fn(x - s), fn(x), fn(x + s)
        d2 = f0 - 2.0 * f1 + f2
        tol = noise * (abs(f0) + 2.0 * abs(f1) + abs(f2) + 1.0)
        if expected == 0:
            flat = max(flat, abs(d2) / tol)
        else:
            worst = min(worst, expected * d2 / tol)
    return 3.0 - flat if expected == 0 else worst


def _h1(x: float, p: float) -> float:
    u = math.pow(x, 1.0 / p)
    return abs(u + 1.0) ** p + abs(u - 1.0) ** p


def _h2(x: float, p: float) -> float:
    y = math.sqrt(x)
    s = p + 1.0
    if y >= 1.0:
        return ((y + 1.0) ** s - (y - 1.0) ** s) / s
    return ((y + 1.0) ** s + (1.0 - y) ** s) / s


def check_h_convexity(p: float, which: int, direction: str = "auto") -> TestVerdict:
    """Curvature of the two transfer functions behind the monotonicity
    proofs: h1(x) = |x^{1/p}+1|^p + |x^{1/p}-1|^p is convex on [1, 2] and
    concave for p >= 2; h2(x) = int_{-1}^{1} |sqrt(x)+u|^p du the reverse.
    At p = 2 both are affine and the verdict asserts flatness.
    """
    p = float(p)
    if not (p >= 1.0 and math.isfinite(p)):
        raise DomainError(f"curvature lemma needs finite p >= 1, got {p!r}")
    if which not in (1, 2):
        raise DomainError(f"which must be 1 or 2, got {which!r}")
    fn = (lambda x: _h1(x, p)) if which == 1 else (lambda x: _h2(x, p))
    if p == 2.0:
        expected = 0
    else:
        convex = (p < 2.0) == (which == 1)
        expected = 1 if convex else -1
        expected = int(expected * _direction_sign(direction))
    centers = np.geomspace(1.0e-2, 1.0e2, 81)
    margin = _second_diff_margin(fn, centers, 1.0e-3, expected, 4.0e-13)
    name = f"h{which}[p={p:g}]"
    if direction == "reversed":
        name += "!rev"
    return _verdict(name, margin, {"expected_curvature": expected})


def check_phi_criterion(phi, a: float, b: float, third_derivative_sign: int,
                        nodes: int = 64) -> TestVerdict:
    """Double-average criterion: h(x) = int_{-b}^{b} int_{-a}^{a}
    phi(u + sqrt(x) v) du dv is convex on [0, inf) exactly when the third
    derivative of the even function phi is nonnegative on [0, inf).

    The caller states the sign (+1, -1, or 0 for an exactly quadratic phi);
    the check measures the curvature of h and compares.  phi must accept
    numpy arrays elementwise.
    """
    a, b = float(a), float(b)
    if not (a > 0.0 and b > 0.0):
        raise DomainError("integration half-widths must be positive")
    if third_derivative_sign not in (-1, 0, 1):
        raise DomainError("third_derivative_sign must be -1, 0, or 1")
    xu, wu = np.polynomial.legendre.leggauss(nodes)
    u = a * xu
    v = b * xu
    wuv = a * b * np.outer(wu, wu)

    def h(x: float) -> float:
        grid = u[:, None] + math.sqrt(x) * v[None, :]
        return float(np.sum(wuv * phi(grid)))

    centers = np.geomspace(1.0e-1, 3.0e1, 41)
    margin = _second_diff_margin(h, centers, 1.0e-2, third_derivative_sign, 1.0e-10)
    name = f"phi-criterion[sign={third_derivative_sign:+d},a={a:g},b={b:g}]"
    return _verdict(name, margin, {"nodes": nodes})


# ---------------------------------------------------------------------------
# interpolation step behind Schur monotonicity

def _mix_density(lam: float, v_fn, h: float) -> GridDensity:
    factors = []
    if lam > 0.0:
        factors.append(_uniform_density(math.sqrt(lam), h))
    factors.append(_uniform_density(math.sqrt(1.0 - lam), h))
    if v_fn is not None:
        factors.append(simple_fn_density(v_fn, h))
    dens = factors[0]
    for f in factors[1:]:
        dens = convolve(dens, f)
    return dens


def _mix_pmoment(lam: float, p: float, v_fn, h: float):
    m, tol, _ = _pmoment_refined(
        lambda st: _mix_density(lam, v_fn, h if st is None else st), p)
    return m, tol


def check_schur_step(lam: float, lam_hi: float, p: float, v_fn=None,
                     spec: GridSpec | None = None,
                     direction: str = "auto") -> TestVerdict:
    """One Schur-ordering step for uniform mixtures: with X_t = sqrt(t) U_1 +
    sqrt(1-t) U_2 and V an independent symmetric unimodal perturbation
    (given as a simple log-concave function or potential spec, or None for
    no perturbation), E|X_lam + V|^p <= E|X_lam_hi + V|^p for p >= 2 and
    lam <= lam_hi <= 1/2, reversed on [1, 2]."""
    lam, lam_hi, p = float(lam), float(lam_hi), float(p)
    if not (0.0 <= lam <= lam_hi <= 0.5):
        raise DomainError("need 0 <= lam <= lam_hi <= 1/2")
    if not (p >= 1.0 and math.isfinite(p)):
        raise DomainError(f"Schur step holds for finite p >= 1, got {p!r}")
    spec = spec or GridSpec()
    scales = [math.sqrt(1.0 - lam), math.sqrt(1.0 - lam_hi)]
    for t in (lam, lam_hi):
        if t > 0.0:
            scales.append(math.sqrt(t))
    radii = list(scales)
    if v_fn is not None:
        radii.append(_simple_fn_radius(v_fn))
    h = _common_step(radii, scales, spec)
    lo, tol_lo = _mix_pmoment(lam, p, v_fn, h)
    hi, tol_hi = _mix_pmoment(lam_hi, p, v_fn, h)
    tol = max(tol_lo, tol_hi) * max(lo, hi)
    sgn = (1.0 if p >= 2.0 else -1.0) * _direction_sign(direction)
    margin = sgn * (hi - lo) / tol
    name = f"schur[{lam:g}->{lam_hi:g},p={p:g}" + (",V]" if v_fn is not None else "]")
    if direction == "reversed":
        name += "!rev"
    return _verdict(name, margin, {"low": lo, "high": hi, "rel_tol": tol / max(lo, hi)})


def check_uniform_small_p(p: float, a, count: int = 1_000_000,
                          seed: int = _DEFAULT_SEED,
                          spec: GridSpec | None = None,
                          method: str = "auto",
                          direction: str = "auto") -> TestVerdict:
    """Edge bound for uniforms at small exponents: for p in (-1, 2) and a
    unit vector a, ||sum a_i U_i||_p <= ||U_1||_p.

    The grid route covers p > 0; negative p (singular integrand) is sampled
    and compared in moment space, where the inequality flips through the
    negative 1/p power.
    """
    p = float(p)
    if not (-1.0 < p < 2.0) or p == 0.0:
        raise DomainError(f"small-p bound covers p in (-1, 0) or (0, 2), got {p!r}")
    coeffs = _check_coeffs(a)
    if abs(math.fsum(v * v for v in coeffs) - 1.0) > 1.0e-9:
        raise DomainError("small-p bound needs a unit coefficient vector")
    if method == "auto":
        method = "grid" if p > 0.0 else "mc"
    if method not in ("grid", "mc"):
        raise DomainError(f"method must be 'auto', 'grid', or 'mc', got {method!r}")
    sgn = _direction_sign(direction)
    name = f"uniform-small-p[p={p:g},n={len(coeffs)},{method}]"
    if direction == "reversed":
        name += "!rev"
    if method == "grid":
        rhs = y_moment(p, INF)
        if len(coeffs) == 1:
            lhs, tol = rhs, _QTOL_EXACT
        else:
            base = spec or GridSpec()
            m, tol, _ = _pmoment_refined(lambda st: _form_density(
                INF, coeffs, base if st is None else replace(base, step=st)), p)
            lhs = math.pow(m, 1.0 / p)
        margin = sgn * (rhs - lhs) / (tol * rhs)
        return _verdict(name, margin, {"form": lhs, "single": rhs, "rel_tol": tol})
    est = _mc_form_pmoment(p, INF, len(coeffs), coeffs, count, seed)
    target = 1.0 / (p + 1.0)
    slack = (target - est.mean) if p > 0.0 else (est.mean - target)
    sigma = max(est.std_err, 1.0e-300)
    margin = sgn * slack / sigma
    detail = {"estimate": est.mean, "std_err": est.std_err, "target": target,
              "n_samples": count, "seed": seed}
    return _verdict(name, margin, detail)


# ---------------------------------------------------------------------------
# density crossings

def _unit_pth_density(s: float, p: float):
    """Density of Y^{(s)} scaled to unit p-th moment, with a scan radius."""
    nu = y_moment(p, s)
    if s == INF:
        edge = 1.0 / nu

        def phi(x: float) -> float:
            return 0.5 * nu if x <= edge else 0.0

        return phi, edge
    ln_c = math.log(s / 2.0) - ln_gamma(1.0 / s)

    def phi(x: float) -> float:
        return nu * math.exp(ln_c - (nu * x) ** s)

    return phi, math.pow(200.0, 1.0 / s) / nu


def check_density_interlace(q: float, r: float, p: float,
                            expected_crossings: int | None = None) -> TestVerdict:
    """Crossing count of the densities of Y^{(q)} and Y^{(r)}, both scaled
    to unit p-th moment: for q < r the difference changes sign exactly twice
    on (0, inf), positive near 0 and in the tail.

    The verdict passes on the crossing count; the observed sign pattern is
    reported but not enforced.  expected_crossings overrides the count to
    assert (a negative-control knob).
    """
    p = float(p)
    if p == 0.0 or not (p > -1.0 and math.isfinite(p)):
        raise DomainError(f"normalizing exponent must be in (-1, 0) or (0, inf), got {p!r}")
    qf, rf = float(q), float(r)
    for s in (qf, rf):
        if s != INF and not (0.0 < s < INF):
            raise DomainError(f"density exponent must be positive or inf, got {s!r}")
    if not (qf <= rf):
        raise DomainError("need q <= r")
    expected = expected_crossings if expected_crossings is not None else (0 if qf == rf else 2)
    name = f"interlace[q={qf:g},r={rf:g},p={p:g}]"
    if qf == rf:
        margin = _MARGIN_CAP if expected == 0 else -3.0 - expected
        return _verdict(name, margin, {"crossings": 0, "pattern": ""})
    phi_q, hi_q = _unit_pth_density(qf, p)
    phi_r, hi_r = _unit_pth_density(rf, p)
    bound = 1.2 * max(hi_q, hi_r)

    def diff(x: float) -> float:
        return phi_q(x) - phi_r(x)

    report = sign_changes(diff, bound, expected_max=4)
    edges = (0.0,) + report.locations + (bound,)
    xs = np.linspace(bound * 1.0e-6, bound, 2048)
    mags = np.abs([diff(x) for x in xs])
    peak = float(mags.max())
    floor = 1.0e-10 * peak
    pattern = ""
    weakest = math.inf
    for u, v in zip(edges, edges[1:]):
        run = [diff(x) for x in xs if u < x < v] or [diff(0.5 * (u + v))]
        amp = max(abs(w) for w in run)
        pattern += "+" if max(run, key=abs) > 0 else "-"
        weakest = min(weakest, amp / floor)
    if report.count == expected:
        margin = weakest
    else:
        margin = -3.0 - abs(report.count - expected)
    detail = {"crossings": report.count, "locations": list(report.locations),
              "pattern": pattern}
    return _verdict(name, margin, detail)


# ---------------------------------------------------------------------------
# the documented default suite

_SUITE_COEFFS = (
    (math.sqrt(0.5), math.sqrt(0.5)),
    (0.6, 0.8),
    (1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0),
    (0.5, 0.5, 0.5, 0.5),
    (math.sqrt(0.7), math.sqrt(0.2), math.sqrt(0.1)),
)
_SUITE_QS = (2.0, 2.5, 3.0, 4.0, 6.0, INF)
_SUITE_PS = (1.0, 1.5, 3.0, 4.0)


def default_suite(seed: int = _DEFAULT_SEED, mc_count: int = 200_000,
                  spec: GridSpec | None = None) -> list:
    """Every check on its documented default grid, plus negative controls.

    Returns the verdicts in a fixed order.  All positive checks pass; the
    trailing negative controls carry a '!neg' name suffix and must fail,
    which confirms each check can actually reject a false claim.
    """
    out = []
    for p in _SUITE_PS:
        for q in _SUITE_QS:
            for a in _SUITE_COEFFS:
                out.append(check_edge(q, a, p, spec))
                out.append(check_gauss_bound(q, a, p, spec))
        for a in _SUITE_COEFFS:
            out.append(check_monotone_psi(_SUITE_QS, a, p, 1, spec))
            out.append(check_monotone_psi(_SUITE_QS, a, p, 2, spec))
    for p in (1.0, 1.5, 2.0, 3.0, 4.0):
        out.append(check_h_convexity(p, 1))
        out.append(check_h_convexity(p, 2))
    out.append(check_phi_criterion(lambda t: t**4, 1.0, 1.0, +1))
    out.append(check_phi_criterion(lambda t: -(t**4), 1.0, 1.0, -1))
    out.append(check_phi_criterion(lambda t: t**2, 1.0, 1.0, 0))
    out.append(check_schur_step(0.1, 0.5, 4.0, None, spec))
    out.append(check_schur_step(0.2, 0.4, 1.5, None, spec))
    out.append(check_uniform_small_p(1.0, _SUITE_COEFFS[0], spec=spec))
    out.append(check_uniform_small_p(0.5, _SUITE_COEFFS[1], spec=spec))
    out.append(check_uniform_small_p(-0.5, _SUITE_COEFFS[1], mc_count, seed))
    for q, r in ((2.0, 3.0), (2.0, 4.0), (3.0, 6.0), (2.0, INF)):
        for p in (1.0, 2.0):
            out.append(check_density_interlace(q, r, p))
    for q, n, a in ((3.0, 2, (0.6, 0.8)), (4.0, 2, (0.6, 0.8)),
                    (2.0, 3, (1.0, 2.0, 2.0)), (INF, 2, (1.0, 1.0))):
        out.append(mc_identity_check(2.0, q, n, a, mc_count, seed, spec))
    # negative controls: same checks with the inequality flipped or the
    # reference doctored; every one of these must fail
    controls = [
        check_edge(4.0, _SUITE_COEFFS[0], 4.0, spec, direction="reversed"),
        check_gauss_bound(INF, _SUITE_COEFFS[1], 3.0, spec, direction="reversed"),
        check_monotone_psi(_SUITE_QS, _SUITE_COEFFS[0], 4.0, 1, spec,
                           direction="reversed"),
        check_h_convexity(4.0, 1, direction="reversed"),
        check_phi_criterion(lambda t: t**4, 1.0, 1.0, -1),
        check_schur_step(0.1, 0.5, 4.0, None, spec, direction="reversed"),
        check_uniform_small_p(1.0, _SUITE_COEFFS[0], spec=spec,
                              direction="reversed"),
        check_density_interlace(2.0, 4.0, 1.0, expected_crossings=0),
        mc_identity_check(2.0, 3.0, 2, (0.6, 0.8), mc_count, seed, spec,
                          reference_scale=0.9),
    ]
    out.extend(replace(v, name=v.name + "!neg") for v in controls)
    return out
