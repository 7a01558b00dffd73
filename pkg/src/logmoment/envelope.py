"""Sharp bounds for the next moment given a feasible moment vector.

Fixing n moments pins every member of the two simple families; their values
at one further exponent are the extreme values the next moment can take over
the whole log-concave class.  Which family realizes the maximum is decided
by the parity rule on the full exponent tuple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .chebyshev import EnvelopeOrientation, parity_rule
from .core import Sign, SimpleLogConcaveFn, canonicalize
from .errors import DomainError, Infeasible, NonConvergence
from .inverse import (
    Feasibility,
    FeasibilityReport,
    SolverConfig,
    SolveStatus,
    feasibility,
    solve_pair,
)
from .moments import ExponentTuple, MomentVector, moment

__all__ = [
    "EnvelopeResult",
    "EnvelopeGridRow",
    "envelope",
    "body_contains",
    "envelope_grid",
    "grid_csv_lines",
]


@dataclass(frozen=True)
class EnvelopeResult:
    """Envelope endpoints with the realizing extremal functions.

    lo <= hi always; equality happens exactly when the constraints sit on
    the moment-body boundary, where both extremals collapse to the same
    lower-order function.
    """

    lo: float
    hi: float
    argmin: SimpleLogConcaveFn
    argmax: SimpleLogConcaveFn
    parity: EnvelopeOrientation


@dataclass(frozen=True)
class EnvelopeGridRow:
    constraints: tuple
    lo: float
    hi: float
    status: str


def envelope(
    p: ExponentTuple,
    constraints: MomentVector,
    cfg: SolverConfig | None = None,
) -> EnvelopeResult:
    """Extreme values of the moment at p[-1] subject to the first n moments.

    p carries n+1 exponents; constraints carries the n prescribed moments.
    Raises Infeasible when the constraints leave the moment body and
    NonConvergence when either extremal solve stalls.
    """
    if not isinstance(p, ExponentTuple):
        p = ExponentTuple(tuple(p))
    if not isinstance(constraints, MomentVector):
        constraints = MomentVector(tuple(constraints))
    if len(p) != len(constraints) + 1:
        raise DomainError(
            f"need one more exponent than constraints, got {len(p)} exponents "
            f"for {len(constraints)} constraints"
        )
    outcome = solve_pair(p.prefix(len(constraints)), constraints, cfg)
    feas = outcome.feasibility
    if feas.verdict is Feasibility.INFEASIBLE:
        raise Infeasible(
            f"constraints leave the moment body at level {feas.level}",
            level=feas.level,
            bounds=feas.interval,
        )
    for s in (Sign.PLUS, Sign.MINUS):
        if outcome.reports[s].status is SolveStatus.NO_CONVERGENCE:
            raise NonConvergence(
                f"{s.value} extremal did not converge: {outcome.reports[s].message}"
            )
    orient = parity_rule(p)
    f_max = canonicalize(outcome.solutions[orient.max_sign])
    f_min = canonicalize(outcome.solutions[orient.min_sign])
    pe = p[-1]
    lo = moment(f_min, pe)
    hi = moment(f_max, pe)
    if lo > hi:
        # boundary collapse can leave the ordering to evaluation noise
        lo, hi = hi, lo
        f_min, f_max = f_max, f_min
    return EnvelopeResult(lo=lo, hi=hi, argmin=f_min, argmax=f_max, parity=orient)


def body_contains(
    p: ExponentTuple,
    m: MomentVector,
    cfg: SolverConfig | None = None,
) -> FeasibilityReport:
    """Moment-body membership of m under the exponents p.

    The verdict is Interior, Boundary or Infeasible; Boundary reports also
    carry the lower-order function realizing the point as their witness.
    """
    return feasibility(p, m, cfg)


def envelope_grid(
    p: ExponentTuple,
    axis: int,
    grid,
    cfg: SolverConfig | None = None,
) -> list:
    """Envelope endpoints for a list of constraint vectors.

    axis names the constraint coordinate the grid varies; it is validated
    against the tuple length and recorded nowhere else, since each point is
    processed independently either way.  Rows come back in input order with
    status 'ok', 'boundary', 'infeasible' or 'no_convergence'; failed rows
    carry nan endpoints instead of aborting the sweep.
    """
    if not isinstance(p, ExponentTuple):
        p = ExponentTuple(tuple(p))
    n = len(p) - 1
    if n < 1:
        raise DomainError("grid export needs at least two exponents")
    if not (0 <= axis < n):
        raise DomainError(f"axis {axis} outside the constraint range 0..{n - 1}")
    rows = []
    for point in grid:
        vec = tuple(float(v) for v in point)
        if len(vec) != n:
            raise DomainError(
                f"grid point {vec!r} has {len(vec)} entries, expected {n}"
            )
        try:
            res = envelope(p, MomentVector(vec), cfg)
        except Infeasible:
            rows.append(EnvelopeGridRow(vec, math.nan, math.nan, "infeasible"))
            continue
        except NonConvergence:
            rows.append(EnvelopeGridRow(vec, math.nan, math.nan, "no_convergence"))
            continue
        scale = max(abs(res.lo), abs(res.hi))
        on_boundary = res.hi - res.lo <= 1.0e-8 * scale
        status = "boundary" if on_boundary else "ok"
        rows.append(EnvelopeGridRow(vec, res.lo, res.hi, status))
    return rows


def grid_csv_lines(n: int, rows) -> list:
    """CSV rendering of grid rows: header m_1..m_n,lo,hi,status then data."""
    header = ",".join([f"m_{i + 1}" for i in range(n)] + ["lo", "hi", "status"])
    lines = [header]
    for row in rows:
        cells = [repr(v) for v in row.constraints]
        cells.append(repr(row.lo))
        cells.append(repr(row.hi))
        cells.append(row.status)
        lines.append(",".join(cells))
    return lines
