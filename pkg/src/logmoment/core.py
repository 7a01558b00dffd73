"""Symmetric log-concave test functions with piecewise log-affine structure.

A function here is f = exp(-V) restricted to t >= 0 (the even extension is
implied throughout), with V convex, piecewise linear, V(0) = 0, and an
optional hard cutoff beyond which f vanishes.  Two surface representations
exist:

* SimpleLogConcaveFn - the parametric families indexed by (order, sign).
  The order counts free parameters; the sign says which of the two extremal
  shapes the family deforms.  Plus families have no forced cutoff and start
  either flat (even order) or with a slope at the origin (odd order); minus
  families carry a cutoff and alternate the other way.  Infinite slopes and
  knots are legal and encode degenerate pieces.

* PotentialSpec - a free-form description of V by cumulative slopes, one
  (slope, knot) pair per linear piece, plus a cutoff.  Anything log-concave
  piecewise log-affine can be written this way.

Both reduce internally to a *jump form*: the increasing sequence of points
where V' jumps, with positive finite jump sizes, plus the cutoff.  The jump
form is unique, which is what makes canonicalization and function equality
decidable, and it is what the moment code consumes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from ._kernels import ln_seg_integral
from .errors import Diverges, DomainError, NotEmbeddable
from .extreal import INF, from_json_value, is_ext, to_json_value


class Sign(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    @classmethod
    def coerce(cls, value) -> "Sign":
        if isinstance(value, Sign):
            return value
        try:
            return cls(value)
        except ValueError:
            raise DomainError(f"sign must be '+' or '-', got {value!r}") from None


@dataclass(frozen=True)
class SimpleClass:
    """A parametric family label: order n >= 0 and extremal sign."""

    order: int
    sign: Sign

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 0:
            raise DomainError(f"order must be a nonnegative int, got {self.order!r}")
        object.__setattr__(self, "sign", Sign.coerce(self.sign))

    @property
    def param_count(self) -> int:
        return self.order


def _template_shape(order: int, sign: Sign):
    """(n_slopes, n_knots, slope_at_origin, has_cutoff) for a family."""
    k, odd = divmod(order, 2)
    if sign is Sign.PLUS:
        if odd:
            return k + 1, k, True, False
        return k, k, False, False
    if odd:
        return k, k + 1, False, True
    return k, k, True, True


@dataclass(frozen=True)
class SimpleLogConcaveFn:
    """A member of the family (order, sign), given by slope and knot lists.

    Layouts (a = slopes, b = knots, all extended reals, knots nondecreasing):

      plus, order 2k:    exp(-sum a_i (t - b_i)_+)             len(a)=len(b)=k
      plus, order 2k+1:  exp(-a_1 t - sum_{i>=2} a_i (t-b_i)_+)  k+1 slopes,
                         knots are the k attachment points of a_2..a_{k+1}
      minus, order 2k:   exp(-a_1 t - sum a_i (t-b_i)_+) on [0, B]; knots are
                         the k-1 interior attachment points followed by B
      minus, order 2k+1: exp(-sum a_i (t - b_i)_+) on [0, B]; knots are the
                         k attachment points followed by B

    Order 0 would be the two-point family {point indicator, constant one},
    which has no parameters to discriminate its members; use the module
    constants POINT_INDICATOR / CONSTANT_ONE (their order-1 boundary forms).
    """

    order: int
    sign: Sign
    slopes: tuple = field(default=())
    knots: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "sign", Sign.coerce(self.sign))
        if not isinstance(self.order, int) or self.order < 1:
            raise DomainError(
                f"function order must be a positive int, got {self.order!r}"
            )
        slopes = tuple(float(a) for a in self.slopes)
        knots = tuple(float(b) for b in self.knots)
        object.__setattr__(self, "slopes", slopes)
        object.__setattr__(self, "knots", knots)
        ns, nk, _, has_cut = _template_shape(self.order, self.sign)
        if len(slopes) != ns or len(knots) != nk:
            raise DomainError(
                f"family (order={self.order}, sign={self.sign.value}) takes "
                f"{ns} slopes and {nk} knots, got {len(slopes)} and {len(knots)}"
            )
        for a in slopes:
            if not is_ext(a):
                raise DomainError(f"slope {a!r} outside [0, inf]")
        for b in knots:
            if not is_ext(b):
                raise DomainError(f"knot {b!r} outside [0, inf]")
        if any(knots[i] > knots[i + 1] for i in range(len(knots) - 1)):
            raise DomainError(f"knots must be nondecreasing, got {knots}")
        if has_cut and knots and len(knots) >= 2:
            # cutoff is the last knot; ordering already enforced above
            pass

    @property
    def family(self) -> SimpleClass:
        return SimpleClass(self.order, self.sign)


@dataclass(frozen=True)
class PotentialSpec:
    """Free-form convex piecewise-linear potential: cumulative slope pieces.

    pieces[i] = (slope, knot) means V' equals slope on [knot, next knot).
    Knots strictly increase starting at 0, slopes are finite, nonnegative and
    nondecreasing.  f = exp(-V) on [0, cutoff], zero beyond.
    """

    pieces: tuple = field(default=())
    cutoff: float = INF

    def __post_init__(self):
        pieces = tuple((float(s), float(b)) for s, b in self.pieces)
        object.__setattr__(self, "pieces", pieces)
        cutoff = float(self.cutoff)
        object.__setattr__(self, "cutoff", cutoff)
        if not is_ext(cutoff) or cutoff <= 0.0:
            raise DomainError(f"cutoff must lie in (0, inf], got {cutoff!r}")
        last_s, last_b = -1.0, -1.0
        for s, b in pieces:
            if not (is_ext(s) and s < INF):
                raise DomainError(f"piece slope must be finite >= 0, got {s!r}")
            if not (is_ext(b) and b < INF):
                raise DomainError(f"piece knot must be finite >= 0, got {b!r}")
            if b <= last_b:
                raise DomainError("piece knots must strictly increase")
            if s < last_s:
                raise DomainError("piece slopes must be nondecreasing (convexity)")
            last_s, last_b = s, b
        if pieces and pieces[0][1] != 0.0:
            raise DomainError("first piece must start at 0")
        if pieces and pieces[-1][1] >= cutoff:
            raise DomainError("last piece starts at or beyond the cutoff")


# ---------------------------------------------------------------------------
# jump form

def _jumps_of_simple(f: SimpleLogConcaveFn):
    ns, nk, slope_at_origin, has_cut = _template_shape(f.order, f.sign)
    cutoff = f.knots[-1] if has_cut else INF
    interior = f.knots[:-1] if has_cut else f.knots
    raw = []
    if slope_at_origin:
        if ns:
            raw.append((0.0, f.slopes[0]))
        raw.extend(zip(interior, f.slopes[1:]))
    else:
        raw.extend(zip(interior, f.slopes))
    return raw, cutoff


def _jumps_of_potential(f: PotentialSpec):
    raw = []
    prev = 0.0
    for s, b in f.pieces:
        if s > prev:
            raw.append((b, s - prev))
        prev = s
    return raw, f.cutoff


def jump_form(f):
    """Reduce either representation to (jumps, cutoff).

    jumps is a tuple of (point, size) with strictly increasing points, finite
    positive sizes, all points below the cutoff.  Infinite slopes become the
    cutoff; zero sizes, infinite points and coincident points are collapsed.
    """
    if isinstance(f, SimpleLogConcaveFn):
        raw, cutoff = _jumps_of_simple(f)
    elif isinstance(f, PotentialSpec):
        raw, cutoff = _jumps_of_potential(f)
    else:
        raise DomainError(f"not a representable function: {f!r}")
    jumps = []
    for b, a in raw:
        if b >= cutoff or a == 0.0 or b == INF:
            continue
        if a == INF:
            cutoff = b
            continue
        if jumps and jumps[-1][0] == b:
            jumps[-1][1] += a
            if jumps[-1][1] == INF:
                cutoff = b
                jumps.pop()
        else:
            jumps.append([b, a])
    jumps = tuple((b, a) for b, a in jumps if b < cutoff)
    return jumps, cutoff


def canonicalize(f) -> SimpleLogConcaveFn:
    """The unique lowest-order representation of f.

    Constant one comes back as order-1 plus with slope 0; the indicator of
    {0} as order-1 minus with cutoff 0.  Everything else lands in the family
    whose parameter count equals the number of genuine degrees of freedom.
    """
    jumps, cutoff = jump_form(f)
    j = len(jumps)
    starts_at_origin = j > 0 and jumps[0][0] == 0.0
    sizes = tuple(a for _, a in jumps)
    points = tuple(b for b, _ in jumps)
    if cutoff == INF:
        if j == 0:
            return CONSTANT_ONE
        if starts_at_origin:
            return SimpleLogConcaveFn(2 * j - 1, Sign.PLUS, sizes, points[1:])
        return SimpleLogConcaveFn(2 * j, Sign.PLUS, sizes, points)
    if cutoff == 0.0 or (j == 0 and cutoff == 0.0):
        return POINT_INDICATOR
    if starts_at_origin:
        return SimpleLogConcaveFn(2 * j, Sign.MINUS, sizes, points[1:] + (cutoff,))
    return SimpleLogConcaveFn(2 * j + 1, Sign.MINUS, sizes, points + (cutoff,))


CONSTANT_ONE = SimpleLogConcaveFn(1, Sign.PLUS, (0.0,), ())
POINT_INDICATOR = SimpleLogConcaveFn(1, Sign.MINUS, (), (0.0,))


# ---------------------------------------------------------------------------
# segments and evaluation

@dataclass(frozen=True)
class Segment:
    """One maximal interval where V is affine: V(t) = v0 + lam * (t - start)."""

    start: float
    end: float
    v0: float
    lam: float


def segments(f) -> tuple:
    """Affine pieces of V covering [0, cutoff], in order."""
    jumps, cutoff = jump_form(f)
    out = []
    pos, v, lam = 0.0, 0.0, 0.0
    for b, a in jumps:
        if b > pos:
            out.append(Segment(pos, b, v, lam))
            v += lam * (b - pos)
            pos = b
        lam += a
    if cutoff > pos:
        out.append(Segment(pos, cutoff, v, lam))
    return tuple(out)


def eval_fn(f, t: float) -> float:
    """f(|t|); the value at a finite cutoff is the left limit."""
    if isinstance(t, (int, float)) and math.isnan(t):
        raise DomainError("eval_fn at NaN")
    t = abs(float(t))
    jumps, cutoff = jump_form(f)
    if t > cutoff:
        return 0.0
    v, pos, lam = 0.0, 0.0, 0.0
    for b, a in jumps:
        if b >= t:
            break
        v += lam * (b - pos)
        pos = b
        lam += a
    v += lam * (t - pos)
    return math.exp(-v)


def eval_grid(f, ts):
    """Vectorized eval_fn over a numpy array (symmetric: |t| is used)."""
    import numpy as np

    ts = np.abs(np.asarray(ts, dtype=float))
    out = np.zeros_like(ts)
    segs = segments(f)
    _, cutoff = jump_form(f)
    for seg in segs:
        mask = (ts >= seg.start) & (ts < seg.end)
        out[mask] = np.exp(-(seg.v0 + seg.lam * (ts[mask] - seg.start)))
    if segs and cutoff < INF:
        last = segs[-1]
        out[ts == cutoff] = math.exp(
            -(last.v0 + last.lam * (last.end - last.start))
        )
    return out


def support_bound(f) -> float:
    """sup of the support: the cutoff, or inf when there is none."""
    _, cutoff = jump_form(f)
    return cutoff


# ---------------------------------------------------------------------------
# embedding into higher families

def _pairs_with_cutoff(jumps, cutoff):
    """Jump pairs with a finite cutoff re-encoded as an infinite slope."""
    pairs = list(jumps)
    if cutoff < INF:
        pairs.append((cutoff, INF))
    return pairs


def embed(f, order: int, sign) -> SimpleLogConcaveFn:
    """Rewrite f inside the family (order, sign), if that family contains it.

    Raises NotEmbeddable when the family lacks the capacity (order below the
    canonical order) or the structure (e.g. a pure decaying exponential in a
    minus family of order 1, which only holds indicators).
    """
    sign = Sign.coerce(sign)
    if not isinstance(order, int) or order < 1:
        raise DomainError(f"target order must be a positive int, got {order!r}")
    jumps, cutoff = jump_form(f)
    k, odd = divmod(order, 2)
    starts_at_origin = bool(jumps) and jumps[0][0] == 0.0

    if sign is Sign.PLUS:
        if odd:
            head = jumps[0][1] if starts_at_origin else 0.0
            rest = jumps[1:] if starts_at_origin else jumps
            pairs = _pairs_with_cutoff(rest, cutoff)
            if len(pairs) > k:
                raise NotEmbeddable(
                    f"(order={order}, sign=+) cannot hold {canonicalize(f)!r}"
                )
            pairs += [(INF, 0.0)] * (k - len(pairs))
            return SimpleLogConcaveFn(
                order,
                sign,
                (head,) + tuple(a for _, a in pairs),
                tuple(b for b, _ in pairs),
            )
        pairs = _pairs_with_cutoff(jumps, cutoff)
        if len(pairs) > k:
            raise NotEmbeddable(
                f"(order={order}, sign=+) cannot hold {canonicalize(f)!r}"
            )
        pairs += [(INF, 0.0)] * (k - len(pairs))
        return SimpleLogConcaveFn(
            order, sign, tuple(a for _, a in pairs), tuple(b for b, _ in pairs)
        )

    # minus families carry the cutoff natively
    if odd:
        if starts_at_origin and jumps[0][1] > 0.0:
            # a genuine slope at the origin needs a knot at 0, allowed:
            pass
        if len(jumps) > k:
            raise NotEmbeddable(
                f"(order={order}, sign=-) cannot hold {canonicalize(f)!r}"
            )
        pad_at = cutoff if cutoff < INF else INF
        pairs = list(jumps) + [(pad_at, 0.0)] * (k - len(jumps))
        return SimpleLogConcaveFn(
            order,
            sign,
            tuple(a for _, a in pairs),
            tuple(b for b, _ in pairs) + (cutoff,),
        )
    if k < 1:
        raise NotEmbeddable("order-0 target cannot hold any parametric member")
    head = jumps[0][1] if starts_at_origin else 0.0
    rest = jumps[1:] if starts_at_origin else jumps
    if len(rest) > k - 1:
        raise NotEmbeddable(
            f"(order={order}, sign=-) cannot hold {canonicalize(f)!r}"
        )
    pad_at = cutoff if cutoff < INF else INF
    rest = list(rest) + [(pad_at, 0.0)] * (k - 1 - len(rest))
    return SimpleLogConcaveFn(
        order,
        sign,
        (head,) + tuple(a for _, a in rest),
        tuple(b for b, _ in rest) + (cutoff,),
    )


def fn_equal(f, g, rel_tol: float = 0.0, abs_tol: float = 0.0) -> bool:
    """Equality of the underlying functions via canonical jump forms."""
    jf, cf = jump_form(f)
    jg, cg = jump_form(g)
    if len(jf) != len(jg):
        return False

    def close(x, y):
        if x == INF or y == INF:
            return x == y
        return abs(x - y) <= max(abs_tol, rel_tol * max(abs(x), abs(y)))

    if not close(cf, cg):
        return False
    return all(
        close(bf, bg) and close(af, ag) for (bf, af), (bg, ag) in zip(jf, jg)
    )


# ---------------------------------------------------------------------------
# metric

def _seg_moment_ln(seg: Segment, p: float) -> float:
    """log of the contribution of one affine piece to the p-th moment."""
    return -seg.v0 + ln_seg_integral(p, seg.lam, seg.start, seg.end)


def distance(f, g, p_lo: float, p_hi: float) -> float:
    """Integral of |f - g| against t^p_lo + t^p_hi over [0, inf).

    Exact up to rounding: on each cell of the union partition both functions
    are exp-affine, so the single possible crossing is solved in closed form
    and each signed piece is a closed-form segment integral.  Raises Diverges
    when either argument is the constant one (the metric is infinite against
    any decaying member, and the convention extends to d(1, 1)).
    """
    if not (p_lo > -1.0 and p_hi > -1.0):
        raise DomainError("weight exponents must exceed -1")
    segs_f = segments(f)
    segs_g = segments(g)
    for segs in (segs_f, segs_g):
        if segs and segs[-1].end == INF and segs[-1].lam == 0.0:
            raise Diverges("distance against the constant function diverges")

    def params_at(segs, t):
        """(v_at_t, lam) if t is inside some piece, else None (f = 0 there)."""
        for seg in segs:
            if seg.start <= t < seg.end:
                return seg.v0 + seg.lam * (t - seg.start), seg.lam
        return None

    cuts = {0.0}
    for segs in (segs_f, segs_g):
        for seg in segs:
            cuts.add(seg.start)
            if seg.end < INF:
                cuts.add(seg.end)
    grid = sorted(cuts)
    cells = list(zip(grid, grid[1:]))
    end_f = segs_f[-1].end if segs_f else 0.0
    end_g = segs_g[-1].end if segs_g else 0.0
    if max(end_f, end_g) == INF:
        cells.append((grid[-1], INF))

    weights = (p_lo, p_hi)
    total = 0.0
    for lo, hi in cells:
        pf = params_at(segs_f, lo)
        pg = params_at(segs_g, lo)
        if pf is None and pg is None:
            continue
        # one function absent on the cell: straight moment of the other
        pieces = [(lo, hi)]
        if pf is not None and pg is not None:
            vf, lf = pf
            vg, lg = pg
            if lf != lg:
                t_cross = lo + (vg - vf) / (lf - lg)
                if lo < t_cross < hi:
                    pieces = [(lo, t_cross), (t_cross, hi)]
        for a, b in pieces:
            acc = 0.0
            for p in weights:
                if pf is not None:
                    vf, lf = pf
                    acc += math.exp(
                        -(vf + lf * (a - lo)) + ln_seg_integral(p, lf, a, b)
                    )
                if pg is not None:
                    vg, lg = pg
                    acc -= math.exp(
                        -(vg + lg * (a - lo)) + ln_seg_integral(p, lg, a, b)
                    )
            total += abs(acc)
    return total


# ---------------------------------------------------------------------------
# JSON descriptors

def fn_to_json(f: SimpleLogConcaveFn) -> dict:
    return {
        "order": f.order,
        "sign": f.sign.value,
        "slopes": [to_json_value(a) for a in f.slopes],
        "knots": [to_json_value(b) for b in f.knots],
    }


def fn_from_json(d: dict) -> SimpleLogConcaveFn:
    try:
        return SimpleLogConcaveFn(
            int(d["order"]),
            Sign.coerce(d["sign"]),
            tuple(from_json_value(a) for a in d["slopes"]),
            tuple(from_json_value(b) for b in d["knots"]),
        )
    except KeyError as exc:
        raise DomainError(f"function descriptor missing key {exc}") from None


def potential_to_json(f: PotentialSpec) -> dict:
    return {
        "pieces": [[to_json_value(s), to_json_value(b)] for s, b in f.pieces],
        "cutoff": to_json_value(f.cutoff),
    }


def potential_from_json(d: dict) -> PotentialSpec:
    try:
        return PotentialSpec(
            tuple((from_json_value(s), from_json_value(b)) for s, b in d["pieces"]),
            from_json_value(d["cutoff"]),
        )
    except KeyError as exc:
        raise DomainError(f"potential descriptor missing key {exc}") from None


def any_fn_from_json(d: dict):
    """Dispatch on descriptor shape: parametric families vs free potentials."""
    if "pieces" in d:
        return potential_from_json(d)
    return fn_from_json(d)
