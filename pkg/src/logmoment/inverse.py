"""Inverse moment problem on the extremal families: continuation solver.

Given strictly positive targets (m_1, ..., m_n) against distinct exponents,
there is at most one member of the order-n plus family and one of the minus
family matching all n one-sided moments.  The solver recovers them by
continuation in the constraint count:

  stage 1   closed form (decaying exponential / indicator)
  stage j   embed the stage j-1 solution one order up, which frees exactly
            one head parameter at the zero end of its range; sweep that
            parameter upward, re-solving the j-1 old constraints with the
            remaining parameters at every sweep point, until the new moment
            crosses its target, then release the head and close the last
            digits with a full Newton polish

The head is the right continuation variable.  With the old constraints
enforced the new moment is strictly monotone along the sweep (two sweep
points with equal new moments would contradict uniqueness one constraint
up), so a bracketing root find cannot get lost; and the inner Newton
systems stay square and well conditioned because the near-boundary head
coordinate is held fixed rather than solved for.

Both signs advance together: the next moments of the two current solutions
are precisely the sharp envelope for the next constraint, so feasibility is
decided stage by stage for free.  Targets that sit on an envelope endpoint
(within the boundary tolerance) identify the unique lower-order function;
both tracks then continue as its embeddings and the final status says
ConvergedOnBoundary.

Internal coordinates are logs of slopes and of consecutive knot gaps, with
degenerate parameters (zero or infinite slopes, zero or infinite gaps) held
as pins, so Newton iterates can never leave the family.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .chebyshev import parity_rule
from .core import (
    POINT_INDICATOR,
    CONSTANT_ONE,
    Sign,
    SimpleLogConcaveFn,
    _template_shape,
    canonicalize,
    embed,
)
from .errors import DomainError, NotEmbeddable
from .extreal import INF
from .moments import ExponentTuple, MomentVector, moment
from .specfun import ln_gamma

MAX_CONSTRAINTS = 12

# |log coordinate| beyond this is treated as a boundary facet and pinned
_PIN_AT = 46.0
_STEP_CAP = 4.0


class SolveStatus(enum.Enum):
    CONVERGED = "Converged"
    CONVERGED_ON_BOUNDARY = "ConvergedOnBoundary"
    INFEASIBLE = "Infeasible"
    NO_CONVERGENCE = "NoConvergence"


class Feasibility(enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class SolverConfig:
    rel_tol: float = 1.0e-10
    max_iter: int = 80
    damping_floor: float = 1.0e-6
    continuation_steps: int = 8
    fd_step: float = 1.0e-6
    boundary_tol: float = 1.0e-8

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1.0e-2):
            raise DomainError(f"rel_tol out of range: {self.rel_tol!r}")
        if self.max_iter < 1 or self.continuation_steps < 1:
            raise DomainError("iteration budgets must be positive")
        if not (0.0 < self.damping_floor < 1.0):
            raise DomainError(f"damping_floor out of range: {self.damping_floor!r}")
        if not (0.0 < self.fd_step < 1.0e-2):
            raise DomainError(f"fd_step out of range: {self.fd_step!r}")
        if not (0.0 < self.boundary_tol < 1.0e-2):
            raise DomainError(f"boundary_tol out of range: {self.boundary_tol!r}")


@dataclass(frozen=True)
class SolveReport:
    solution: SimpleLogConcaveFn | None
    status: SolveStatus
    residual: float
    iterations: int
    trace: tuple
    message: str = ""


@dataclass(frozen=True)
class FeasibilityReport:
    verdict: Feasibility
    level: int | None = None
    interval: tuple | None = None
    witness: SimpleLogConcaveFn | None = None


# ---------------------------------------------------------------------------
# internal coordinates

@dataclass(frozen=True)
class InternalCoords:
    """Unconstrained view of a family member: logs of slopes and knot gaps.

    values holds the log coordinates of the free parameters in template
    order (slopes first, then gaps).  pins records parameters held at a
    boundary facet: ('slope'|'gap', index, 0.0 or inf).
    """

    order: int
    sign: Sign
    values: tuple
    pins: tuple


class _State:
    """Mutable solver-side twin of SimpleLogConcaveFn, in slope/gap form.

    Knots are stored as consecutive gaps, so moving an early knot carries
    every later knot (and the cutoff, for minus families) along with it.
    Pinned entries keep their stored value and are excluded from the free
    vector; pins are either canonical facet values (0, inf) or, during a
    stage sweep, the fixed head position.
    """

    __slots__ = ("order", "sign", "slopes", "gaps", "pin_slope", "pin_gap")

    def __init__(self, order, sign, slopes, gaps, pin_slope, pin_gap):
        self.order = order
        self.sign = sign
        self.slopes = list(slopes)
        self.gaps = list(gaps)
        self.pin_slope = list(pin_slope)
        self.pin_gap = list(pin_gap)

    @classmethod
    def from_fn(cls, f: SimpleLogConcaveFn) -> "_State":
        """Pins are inferred: zero/infinite slopes, zero/infinite gaps."""
        pin_slope = [a == 0.0 or a == INF for a in f.slopes]
        gaps = []
        pos = 0.0
        for b in f.knots:
            if pos == INF:
                gaps.append(0.0)
            elif b == INF:
                gaps.append(INF)
            else:
                gaps.append(b - pos)
            pos = b
        pin_gap = [g == 0.0 or g == INF for g in gaps]
        return cls(f.order, f.sign, f.slopes, gaps, pin_slope, pin_gap)

    def clone(self) -> "_State":
        return _State(
            self.order, self.sign, self.slopes, self.gaps,
            self.pin_slope, self.pin_gap,
        )

    def fn(self) -> SimpleLogConcaveFn:
        knots = []
        pos = 0.0
        for g in self.gaps:
            pos = pos + g
            knots.append(pos)
        return SimpleLogConcaveFn(
            self.order, self.sign, tuple(self.slopes), tuple(knots)
        )

    def free_count(self) -> int:
        return (len(self.pin_slope) - sum(self.pin_slope)) + (
            len(self.pin_gap) - sum(self.pin_gap)
        )

    def free_vector(self) -> np.ndarray:
        out = [
            math.log(a) for a, pin in zip(self.slopes, self.pin_slope) if not pin
        ]
        out += [
            math.log(g) for g, pin in zip(self.gaps, self.pin_gap) if not pin
        ]
        return np.array(out, dtype=float)

    def set_free(self, x) -> None:
        i = 0
        for j, pin in enumerate(self.pin_slope):
            if not pin:
                self.slopes[j] = math.exp(x[i])
                i += 1
        for j, pin in enumerate(self.pin_gap):
            if not pin:
                self.gaps[j] = math.exp(x[i])
                i += 1

    def pin_overflow_coords(self) -> bool:
        """Pin any free coordinate beyond the facet threshold.  True if any."""
        did = False
        for j, pin in enumerate(self.pin_slope):
            if pin:
                continue
            v = math.log(self.slopes[j])
            if v < -_PIN_AT:
                self.slopes[j] = 0.0
                self.pin_slope[j] = True
                did = True
            elif v > _PIN_AT:
                self.slopes[j] = INF
                self.pin_slope[j] = True
                did = True
        for j, pin in enumerate(self.pin_gap):
            if pin:
                continue
            v = math.log(self.gaps[j])
            if v < -_PIN_AT:
                self.gaps[j] = 0.0
                self.pin_gap[j] = True
                did = True
            elif v > _PIN_AT:
                self.gaps[j] = INF
                self.pin_gap[j] = True
                did = True
        return did


def internal_coords(f: SimpleLogConcaveFn) -> InternalCoords:
    """Log-coordinate view of f with boundary parameters recorded as pins."""
    st = _State.from_fn(f)
    pins = [
        ("slope", j, st.slopes[j])
        for j, pin in enumerate(st.pin_slope)
        if pin
    ]
    pins += [
        ("gap", j, st.gaps[j]) for j, pin in enumerate(st.pin_gap) if pin
    ]
    return InternalCoords(
        order=f.order,
        sign=f.sign,
        values=tuple(float(v) for v in st.free_vector()),
        pins=tuple(pins),
    )


def from_internal_coords(ic: InternalCoords) -> SimpleLogConcaveFn:
    ns, nk, _, _ = _template_shape(ic.order, Sign.coerce(ic.sign))
    pin_slope = [False] * ns
    pin_gap = [False] * nk
    slopes = [1.0] * ns
    gaps = [1.0] * nk
    for kind, j, value in ic.pins:
        if kind == "slope":
            pin_slope[j] = True
            slopes[j] = value
        elif kind == "gap":
            pin_gap[j] = True
            gaps[j] = value
        else:
            raise DomainError(f"unknown pin kind {kind!r}")
    st = _State(ic.order, Sign.coerce(ic.sign), slopes, gaps, pin_slope, pin_gap)
    if len(ic.values) != st.free_count():
        raise DomainError(
            f"expected {st.free_count()} free coordinates, got {len(ic.values)}"
        )
    st.set_free(np.array(ic.values, dtype=float))
    return st.fn()


# ---------------------------------------------------------------------------
# residuals and Newton

def _log_residual(state: _State, exps, ln_targets) -> np.ndarray | None:
    """r_i = log m_i(f) - log target_i, or None when a moment degenerates."""
    try:
        f = state.fn()
    except DomainError:
        return None
    out = np.empty(len(exps))
    for i, p in enumerate(exps):
        m = moment(f, p)
        if not (0.0 < m < INF):
            return None
        out[i] = math.log(m) - ln_targets[i]
    return out


def _fd_jacobian(state: _State, x, exps, ln_targets, h: float, stencil: int = 2):
    """Finite-difference Jacobian of the log residuals.

    stencil 2 is the plain central difference; stencil 4 uses five points
    and a wider step, pushing the derivative error low enough that the
    final polish can reach residuals near evaluation noise even on badly
    conditioned instances.
    """
    n = len(exps)
    cols = []
    work = state.clone()

    def at(xq):
        work.set_free(xq)
        return _log_residual(work, exps, ln_targets)

    for i in range(len(x)):
        if stencil == 4:
            vals = []
            for k in (-2.0, -1.0, 1.0, 2.0):
                xq = x.copy()
                xq[i] += k * h
                vals.append(at(xq))
            if any(v is None for v in vals):
                return None
            col = (vals[0] - 8.0 * vals[1] + 8.0 * vals[2] - vals[3]) / (12.0 * h)
        else:
            xp = x.copy()
            xp[i] += h
            rp = at(xp)
            xm = x.copy()
            xm[i] -= h
            rm = at(xm)
            if rp is None or rm is None:
                return None
            col = (rp - rm) / (2.0 * h)
        cols.append(col)
    work.set_free(x)
    return np.column_stack(cols) if cols else np.zeros((n, 0))


def _newton(
    state: _State,
    exps,
    ln_targets,
    cfg: SolverConfig,
    trace: list,
    pin_abort: bool = False,
):
    """Damped Newton with backtracking and facet pinning.

    Returns (converged, iterations, on_boundary).  The convergence bar is
    rel_tol for a square system and boundary_tol once parameters are pinned
    (the reduced system is overdetermined and lands on the facet image).
    With pin_abort the solve gives up as soon as a coordinate pins; sweep
    probes use this, because a runaway coordinate there means the probe sits
    past a feasibility wall and finishing the solve is wasted work.
    """
    iters = 0
    on_boundary = state.free_count() < len(exps)
    while iters < cfg.max_iter:
        x = state.free_vector()
        r = _log_residual(state, exps, ln_targets)
        if r is None:
            return False, iters, on_boundary
        rnorm = float(np.max(np.abs(r)))
        trace.append(rnorm)
        bar = max(cfg.rel_tol, cfg.boundary_tol) if on_boundary else cfg.rel_tol
        if rnorm <= bar:
            return True, iters, on_boundary
        jac = _fd_jacobian(state, x, exps, ln_targets, cfg.fd_step)
        if jac is None or jac.shape[1] == 0:
            return False, iters, on_boundary
        try:
            if jac.shape[0] == jac.shape[1]:
                step = np.linalg.solve(jac, -r)
            else:
                step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        if not np.all(np.isfinite(step)):
            return False, iters, on_boundary
        cap = float(np.max(np.abs(step)))
        if cap > _STEP_CAP:
            step *= _STEP_CAP / cap
        base = float(np.linalg.norm(r))
        t = 1.0
        accepted = False
        while t >= cfg.damping_floor:
            state.set_free(x + t * step)
            r_new = _log_residual(state, exps, ln_targets)
            if r_new is not None and float(np.linalg.norm(r_new)) < base * (
                1.0 - 1.0e-4 * t
            ):
                accepted = True
                break
            t *= 0.5
        iters += 1
        if not accepted:
            state.set_free(x)
            return False, iters, on_boundary
        if state.pin_overflow_coords():
            if pin_abort:
                return False, iters, True
            on_boundary = True
    return False, iters, on_boundary


def _polish(state: _State, exps, ln_targets, cfg: SolverConfig):
    """Undamped Newton with the wide five-point Jacobian.

    Tightly clustered exponents leave the residual with a long, curved,
    nearly flat valley.  A monotone line search cannot traverse it: any
    step long enough to make progress first climbs the valley wall, so
    every damped step gets rejected and the iterate freezes partway down.
    Full steps overshoot that wall once and are pulled back quadratically;
    tracking the best visited point makes the scheme safe, since the exit
    state is never worse than the entry.

    Returns (iterations, best residual norm).
    """
    x = state.free_vector()
    best_x = x.copy()
    best = math.inf
    bad = 0
    iters = 0
    while iters < cfg.max_iter:
        r = _log_residual(state, exps, ln_targets)
        if r is None:
            break
        nrm = float(np.max(np.abs(r)))
        if nrm < best:
            best, best_x = nrm, x.copy()
            bad = 0
        else:
            bad += 1
            if bad >= 3:
                break
        if best <= cfg.rel_tol:
            break
        jac = _fd_jacobian(state, x, exps, ln_targets, cfg.fd_step, stencil=4)
        if jac is None or jac.shape[1] == 0:
            break
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        if not np.all(np.isfinite(step)):
            break
        if float(np.max(np.abs(step))) > _STEP_CAP:
            break
        x = x + step
        if float(np.max(np.abs(x))) > _PIN_AT:
            break
        state.set_free(x)
        iters += 1
    state.set_free(best_x)
    return iters, best


# ---------------------------------------------------------------------------
# stage machinery

def _first_stage(p1: float, target: float, sign: Sign) -> SimpleLogConcaveFn:
    if sign is Sign.PLUS:
        a = math.exp((ln_gamma(p1 + 1.0) - math.log(target)) / (p1 + 1.0))
        return SimpleLogConcaveFn(1, Sign.PLUS, (a,), ())
    b = ((p1 + 1.0) * target) ** (1.0 / (p1 + 1.0))
    return SimpleLogConcaveFn(1, Sign.MINUS, (), (b,))


def _head_kind(order: int, sign: Sign) -> str:
    """Which parameter the order raise frees: 'slope' or 'gap' (index 0)."""
    if sign is Sign.PLUS:
        return "gap" if order % 2 == 0 else "slope"
    return "slope" if order % 2 == 0 else "gap"


def _geomean(vals) -> float | None:
    vals = [v for v in vals if 0.0 < v < INF]
    if not vals:
        return None
    return math.exp(sum(math.log(v) for v in vals) / len(vals))


def _head_scale(state: _State, kind: str) -> float:
    """A magnitude for the head parameter drawn from its siblings."""
    sa = _geomean(state.slopes[1:] if kind == "slope" else state.slopes)
    sb = _geomean(state.gaps[1:] if kind == "gap" else state.gaps)
    if kind == "slope":
        if sa is not None:
            return sa
        return 1.0 / sb if sb else 1.0
    if sb is not None:
        return sb
    return 1.0 / sa if sa else 1.0


def _free_slots(state: _State):
    """(kind, index) labels for the free coordinates, in free_vector order."""
    slots = [("slope", j) for j, pin in enumerate(state.pin_slope) if not pin]
    slots += [("gap", j) for j, pin in enumerate(state.pin_gap) if not pin]
    return slots


def _corrector(warm, x_pred, slots, pivot, old_exps, ln_old, pe, ln_te, cfg, trace):
    """Project a predicted point back onto the constraint curve.

    The pivot coordinate is held at its predicted value and the remaining
    coordinates solve the old constraints.  Returns (state, coords, g,
    iterations) with g the log residual of the new moment, or Nones when
    the solve fails or the point leaves the coordinate box.
    """
    st = warm.clone()
    st.set_free(x_pred)
    kind, j = slots[pivot]
    if kind == "slope":
        st.pin_slope[j] = True
    else:
        st.pin_gap[j] = True
    ok, iters, _ = _newton(st, old_exps, ln_old, cfg, trace, pin_abort=True)
    if kind == "slope":
        st.pin_slope[j] = False
    else:
        st.pin_gap[j] = False
    if not ok:
        return None, None, None, iters
    x = st.free_vector()
    if float(np.max(np.abs(x))) > _PIN_AT:
        return None, None, None, iters
    mv = moment(st.fn(), pe)
    if not (0.0 < mv < INF):
        return None, None, None, iters
    return st, x, math.log(mv) - ln_te, iters


def _curve_tangent(state, x, old_exps, ln_old, h):
    """Unit null vector of the old-constraint Jacobian at a curve point."""
    jac = _fd_jacobian(state, x, old_exps, ln_old, h)
    if jac is None:
        return None
    try:
        _, _, vt = np.linalg.svd(jac)
    except np.linalg.LinAlgError:
        return None
    t = vt[-1]
    nrm = float(np.linalg.norm(t))
    if nrm == 0.0 or not np.all(np.isfinite(t)):
        return None
    return t / nrm


def _solve_stage(
    prev_fn: SimpleLogConcaveFn,
    sign: Sign,
    order: int,
    exps,
    targets,
    cfg: SolverConfig,
    trace: list,
):
    """Advance one constraint.  Returns (fn | None, iterations, on_boundary).

    The old constraints cut a curve through the order-j family; it starts
    at the embedded previous solution and is tracked by pseudo-arclength
    steps (predict along the Jacobian null direction, correct with the
    best-aligned coordinate pinned, so folds in any single coordinate are
    walked through).  The new moment is strictly monotone along the curve:
    two curve points with equal new moments would be distinct members
    matching all j moments.  The target crossing is therefore bracketed by
    the first sign change and cannot be skipped.
    """
    base = embed(prev_fn, order, sign)
    kind = _head_kind(order, sign)
    old_exps, pe = list(exps[:-1]), exps[-1]
    ln_old = [math.log(t) for t in targets[:-1]]
    ln_te = math.log(targets[-1])
    mu = moment(base, pe)
    if not (0.0 < mu < INF):
        return None, 0, False
    side0 = (math.log(mu) - ln_te) > 0.0

    # the inner bar stays at rel_tol: the achievable residual floor is the
    # moment evaluation noise amplified by the conditioning of the inner
    # system, and asking for more only turns floor-level solves into
    # failures
    cfg_in = replace(cfg, max_iter=min(cfg.max_iter, 30))
    total = 0
    budget = 300

    # anchor: lift the freed head just off its facet and solve the old
    # constraints there, giving a first interior point on the curve
    st0 = _State.from_fn(base)
    if kind == "slope":
        st0.pin_slope[0] = True
    else:
        st0.pin_gap[0] = True
    scale = _head_scale(st0, kind)

    def eval_at_head(c):
        st = st0.clone()
        if kind == "slope":
            st.slopes[0] = c
        else:
            st.gaps[0] = c
        ok, it, _ = _newton(st, old_exps, ln_old, cfg_in, trace, pin_abort=True)
        if not ok:
            return None, None, it
        if kind == "slope":
            st.pin_slope[0] = False
        else:
            st.pin_gap[0] = False
        mv = moment(st.fn(), pe)
        if not (0.0 < mv < INF):
            return None, None, it
        return st, math.log(mv) - ln_te, it

    anchor = None
    flipped = None
    bracket = None
    c = scale / 512.0
    for _ in range(8):
        st, g, it = eval_at_head(c)
        total += it
        budget -= 1
        if st is not None:
            if (g > 0.0) == side0:
                anchor = st
                break
            flipped = (st, g)
        c /= 8.0
    if anchor is None and flipped is not None:
        # the crossing sits below the ladder floor (target within a hair of
        # this track's own envelope endpoint); anchor very deep instead and
        # go straight to the bracket refinement
        st, g, it = eval_at_head(c * 1.0e-8)
        total += it
        budget -= 1
        if st is not None and (g > 0.0) == side0:
            anchor = st
            bracket = (
                st, st.free_vector(), g,
                flipped[0], flipped[0].free_vector(), flipped[1],
            )
    if anchor is None:
        return None, total, False

    slots = _free_slots(anchor)
    head_slot = slots.index((kind, 0))
    x = anchor.free_vector()
    g = math.log(moment(anchor.fn(), pe)) - ln_te
    st = anchor
    if bracket is None:
        t = _curve_tangent(st, x, old_exps, ln_old, cfg.fd_step)
        if t is None:
            return None, total, False
        if t[head_slot] < 0.0:
            t = -t

    # track the curve until the new moment crosses its target
    h = 0.4
    while budget > 0 and bracket is None:
        x_pred = x + h * t
        pivot = int(np.argmax(np.abs(t)))
        stc, xc, gc, it = _corrector(
            st, x_pred, slots, pivot, old_exps, ln_old, pe, ln_te, cfg_in, trace
        )
        total += it
        budget -= 1
        if stc is None:
            h *= 0.5
            if h < 1.0e-8:
                return None, total, False
            continue
        d = xc - x
        if float(np.dot(d, t)) <= 0.0:
            # the corrector slid backward along the curve (sharp bend);
            # accepting it would reverse the march direction
            h *= 0.5
            if h < 1.0e-8:
                return None, total, False
            continue
        if (gc > 0.0) != side0:
            bracket = (st, x, g, stc, xc, gc)
            break
        tn = _curve_tangent(stc, xc, old_exps, ln_old, cfg.fd_step)
        if tn is None:
            h *= 0.5
            if h < 1.0e-8:
                return None, total, False
            continue
        if float(np.dot(tn, d)) < 0.0:
            tn = -tn
        st, x, g, t = stc, xc, gc, tn
        h = min(h * 1.4, 0.8)
    if bracket is None:
        return None, total, False

    # shrink the bracket along the curve until it is nearly straight
    sa, xa, ga, sb, xb, gb = bracket
    while float(np.max(np.abs(xb - xa))) > 0.3 and budget > 0:
        d = xb - xa
        pivot = int(np.argmax(np.abs(d)))
        for frac in (0.5, 0.25, 0.1):
            xm = xa + frac * d
            stm, xmc, gm, it = _corrector(
                sa, xm, slots, pivot, old_exps, ln_old, pe, ln_te, cfg_in, trace
            )
            total += it
            budget -= 1
            if stm is not None:
                break
        if stm is None:
            return None, total, False
        if (gm > 0.0) == side0:
            sa, xa, ga = stm, xmc, gm
        else:
            sb, xb, gb = stm, xmc, gm

    # Illinois false position in the dominant coordinate of the bracket
    pivot = int(np.argmax(np.abs(xb - xa)))
    bar = 0.5 * cfg.rel_tol
    best = None
    last_side = 0
    while budget > 0:
        va, vb = xa[pivot], xb[pivot]
        if gb == ga:
            lam = 0.5
        else:
            lam = ga / (ga - gb)
        lam = min(max(lam, 0.01), 0.99)
        xm = xa + lam * (xb - xa)
        warm = sa if lam <= 0.5 else sb
        stm, xmc, gm, it = _corrector(
            warm, xm, slots, pivot, old_exps, ln_old, pe, ln_te, cfg_in, trace
        )
        total += it
        budget -= 1
        if stm is None:
            xm = xa + 0.5 * (xb - xa)
            stm, xmc, gm, it = _corrector(
                sa, xm, slots, pivot, old_exps, ln_old, pe, ln_te, cfg_in, trace
            )
            total += it
            budget -= 1
            if stm is None:
                return None, total, False
        if abs(gm) <= bar or abs(vb - va) < 1.0e-13:
            best = stm
            break
        if (gm > 0.0) == (ga > 0.0):
            if last_side == -1:
                gb *= 0.5
            sa, xa, ga = stm, xmc, gm
            last_side = -1
        else:
            if last_side == 1:
                ga *= 0.5
            sb, xb, gb = stm, xmc, gm
            last_side = 1
    if best is None:
        return None, total, False

    # close the remaining digits on the full system
    ln_full = ln_old + [ln_te]
    cfg_pol = replace(
        cfg,
        rel_tol=max(1.0e-14, cfg.rel_tol * 1.0e-4),
        max_iter=24,
        fd_step=1.0e-3,
    )
    it, _ = _polish(best, list(exps), ln_full, cfg_pol)
    total += it
    r = _log_residual(best, list(exps), ln_full)
    # conditioning can keep the attainable residual somewhat above rel_tol;
    # accept up to two extra orders and let the report carry the real value
    if r is None or float(np.max(np.abs(r))) > 100.0 * cfg.rel_tol:
        return None, total, False
    return best.fn(), total, False


# ---------------------------------------------------------------------------
# lockstep driver

@dataclass(frozen=True)
class _PairOutcome:
    reports: dict           # Sign -> SolveReport
    feasibility: FeasibilityReport
    solutions: dict         # Sign -> SimpleLogConcaveFn | None


def _degenerate_pair(p: ExponentTuple, targets: MomentVector, boundary_fn):
    reports = {}
    sols = {}
    for s in (Sign.PLUS, Sign.MINUS):
        try:
            sol = embed(boundary_fn, len(p), s)
        except NotEmbeddable:
            sol = canonicalize(boundary_fn)
        reports[s] = SolveReport(
            solution=sol,
            status=SolveStatus.CONVERGED_ON_BOUNDARY,
            residual=0.0,
            iterations=0,
            trace=(),
        )
        sols[s] = sol
    feas = FeasibilityReport(
        verdict=Feasibility.BOUNDARY, level=1, witness=canonicalize(boundary_fn)
    )
    return _PairOutcome(reports, feas, sols)


def solve_pair(
    p: ExponentTuple, targets: MomentVector, cfg: SolverConfig | None = None
) -> _PairOutcome:
    """Run the lockstep continuation for both signs; shared by the public ops."""
    cfg = cfg or SolverConfig()
    if not isinstance(p, ExponentTuple):
        p = ExponentTuple(tuple(p))
    if not isinstance(targets, MomentVector):
        targets = MomentVector(tuple(targets))
    n = len(p)
    if len(targets) != n:
        raise DomainError("exponents and targets must have equal length")
    if n > MAX_CONSTRAINTS:
        raise DomainError(
            f"at most {MAX_CONSTRAINTS} constraints are supported, got {n}"
        )
    if targets.degenerate:
        which = POINT_INDICATOR if targets[0] == 0.0 else CONSTANT_ONE
        return _degenerate_pair(p, targets, which)

    exps = list(p)
    tvals = list(targets)
    current = {}
    trace: list = []
    iters_total = {Sign.PLUS: 0, Sign.MINUS: 0}
    done_stage = {Sign.PLUS: 1, Sign.MINUS: 1}
    stalled: dict = {}
    boundary_at: int | None = None
    boundary_witness = None
    feas: FeasibilityReport | None = None

    current[Sign.PLUS] = _first_stage(exps[0], tvals[0], Sign.PLUS)
    current[Sign.MINUS] = _first_stage(exps[0], tvals[0], Sign.MINUS)

    for j in range(2, n + 1):
        pe, te = exps[j - 1], tvals[j - 1]
        if boundary_at is not None:
            # the function is already unique; the next target must agree
            mj = moment(current[Sign.PLUS], pe)
            if abs(math.log(mj) - math.log(te)) > cfg.boundary_tol:
                feas = FeasibilityReport(
                    verdict=Feasibility.INFEASIBLE, level=j, interval=(mj, mj)
                )
                break
            for s in (Sign.PLUS, Sign.MINUS):
                current[s] = embed(canonicalize(current[s]), j, s)
                done_stage[s] = j
            continue
        if stalled:
            break  # envelope endpoints are gone; cannot classify further
        m_plus = moment(current[Sign.PLUS], pe)
        m_minus = moment(current[Sign.MINUS], pe)
        orient = parity_rule(ExponentTuple(tuple(exps[:j])))
        hi_val, hi_fn = (
            (m_plus, current[Sign.PLUS])
            if orient.max_sign is Sign.PLUS
            else (m_minus, current[Sign.MINUS])
        )
        lo_val, lo_fn = (
            (m_minus, current[Sign.MINUS])
            if orient.max_sign is Sign.PLUS
            else (m_plus, current[Sign.PLUS])
        )
        if te < lo_val * (1.0 - cfg.boundary_tol) or te > hi_val * (
            1.0 + cfg.boundary_tol
        ):
            feas = FeasibilityReport(
                verdict=Feasibility.INFEASIBLE, level=j, interval=(lo_val, hi_val)
            )
            break
        hit_lo = abs(te - lo_val) <= cfg.boundary_tol * lo_val
        hit_hi = abs(te - hi_val) <= cfg.boundary_tol * hi_val
        if hit_lo or hit_hi:
            witness = lo_fn if hit_lo else hi_fn
            boundary_at = j
            boundary_witness = canonicalize(witness)
            for s in (Sign.PLUS, Sign.MINUS):
                current[s] = embed(boundary_witness, j, s)
                done_stage[s] = j
            continue
        for s in (Sign.PLUS, Sign.MINUS):
            fn_j, iters, _ = _solve_stage(
                current[s], s, j, exps[:j], tvals[:j], cfg, trace
            )
            iters_total[s] += iters
            if fn_j is None:
                stalled[s] = j
            else:
                current[s] = fn_j
                done_stage[s] = j

    if feas is None:
        if boundary_at is not None:
            feas = FeasibilityReport(
                verdict=Feasibility.BOUNDARY,
                level=boundary_at,
                witness=boundary_witness,
            )
        else:
            feas = FeasibilityReport(verdict=Feasibility.INTERIOR)

    ln_t = [math.log(t) for t in tvals]
    reports = {}
    sols = {}
    for s in (Sign.PLUS, Sign.MINUS):
        if feas.verdict is Feasibility.INFEASIBLE:
            reports[s] = SolveReport(
                solution=None,
                status=SolveStatus.INFEASIBLE,
                residual=math.nan,
                iterations=iters_total[s],
                trace=tuple(trace),
                message=(
                    f"target {feas.level} outside the feasible interval "
                    f"{feas.interval}"
                ),
            )
            sols[s] = None
            continue
        if done_stage[s] < n:
            msg = (
                f"continuation stalled at stage {stalled[s]}"
                if s in stalled
                else "stopped after the companion track stalled (no envelope)"
            )
            reports[s] = SolveReport(
                solution=None,
                status=SolveStatus.NO_CONVERGENCE,
                residual=math.nan,
                iterations=iters_total[s],
                trace=tuple(trace),
                message=msg,
            )
            sols[s] = None
            continue
        f = current[s]
        res = max(
            abs(math.log(moment(f, pe)) - lt) for pe, lt in zip(exps, ln_t)
        )
        status = (
            SolveStatus.CONVERGED_ON_BOUNDARY
            if feas.verdict is Feasibility.BOUNDARY
            else SolveStatus.CONVERGED
        )
        reports[s] = SolveReport(
            solution=f,
            status=status,
            residual=res,
            iterations=iters_total[s],
            trace=tuple(trace),
        )
        sols[s] = f
    return _PairOutcome(reports, feas, sols)


# ---------------------------------------------------------------------------
# public surface

def match_moments(
    p: ExponentTuple,
    targets: MomentVector,
    sign,
    cfg: SolverConfig | None = None,
) -> SolveReport:
    """Recover the unique member of the order-n family with the given moments.

    n = len(p) = len(targets) <= 12.  Status Infeasible when the target
    vector leaves the moment body, ConvergedOnBoundary when it sits on an
    envelope facet (the solution is then a lower-order function embedded in
    the requested family), NoConvergence when the continuation stalls.
    """
    outcome = solve_pair(p, targets, cfg)
    return outcome.reports[Sign.coerce(sign)]


def feasibility(
    p: ExponentTuple, targets: MomentVector, cfg: SolverConfig | None = None
) -> FeasibilityReport:
    """Interior / Boundary / Infeasible classification of a target vector."""
    if not isinstance(targets, MomentVector):
        targets = MomentVector(tuple(targets))
    if targets.degenerate:
        witness = POINT_INDICATOR if targets[0] == 0.0 else CONSTANT_ONE
        return FeasibilityReport(
            verdict=Feasibility.BOUNDARY, level=1, witness=witness
        )
    return solve_pair(p, targets, cfg).feasibility
