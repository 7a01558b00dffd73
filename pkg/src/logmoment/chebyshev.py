"""Power-system linear algebra: generalized Vandermonde determinants,
separating power sums, sign-change counting, and the parity rule.

Real powers t^p on (0, inf) form a Chebyshev system: any nontrivial
combination of k+1 distinct powers has at most k positive zeros, and the
generalized Vandermonde determinant det(t_i^{p_j}) over increasing nodes and
exponents is strictly positive.  The routines here make those facts
numerically actionable, with an extended-precision escape hatch for the
ill-conditioned corners.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import Sign
from .errors import DomainError, IllConditioned, UnresolvedBand
from .moments import ExponentTuple

# below this many trustworthy digits the double-precision LU result is
# rejected and the extended-precision path (or IllConditioned) takes over
_MIN_TRUST_DIGITS = 3.0
_EXTENDED_MAX_SIZE = 6
_EXTENDED_DPS = 50

_GRID_CELLS = 4096  # default sign-scan resolution (2^12)
_BAND_REL_TOL = 1.0e-12
_BISECT_STEPS = 80


@dataclass(frozen=True)
class NodeVector:
    """Strictly increasing, strictly positive, finite evaluation nodes."""

    nodes: tuple

    def __post_init__(self):
        nodes = tuple(float(t) for t in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if not nodes:
            raise DomainError("at least one node is required")
        for t in nodes:
            if not (0.0 < t < math.inf):
                raise DomainError(f"nodes must be positive finite, got {t!r}")
        if any(nodes[i] >= nodes[i + 1] for i in range(len(nodes) - 1)):
            raise DomainError(f"nodes must strictly increase, got {nodes}")

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)


def _lu_factor(mat: np.ndarray):
    """Partially pivoted LU in place; returns (lu, perm_sign, trust_digits).

    trust_digits is a crude but effective estimate: machine digits minus the
    digits eaten by pivot spread and element growth.
    """
    a = np.array(mat, dtype=float)
    n = a.shape[0]
    sign = 1.0
    scale0 = np.max(np.abs(a)) or 1.0
    growth = 1.0
    for col in range(n - 1):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            sign = -sign
        if a[col, col] == 0.0:
            return a, 0.0, 0.0
        a[col + 1 :, col] /= a[col, col]
        a[col + 1 :, col + 1 :] -= np.outer(a[col + 1 :, col], a[col, col + 1 :])
        growth = max(growth, np.max(np.abs(a[col:, col:])) / scale0)
    pivots = np.abs(np.diag(a))
    if np.any(pivots == 0.0):
        return a, 0.0, 0.0
    spread = np.max(pivots) / np.min(pivots)
    trust = 15.6 - math.log10(spread * growth)
    return a, sign, trust


def _scaled_power_matrix(nodes, exps, base: float) -> np.ndarray:
    t = np.asarray(nodes, dtype=float)
    p = np.asarray(exps, dtype=float) - base
    return np.power.outer(t, p)


def _extended_det_sign_log(nodes, exps, base):
    """(sign, log10|det|) of the scaled power matrix at 50 digits."""
    import mpmath

    with mpmath.workdps(_EXTENDED_DPS):
        n = len(nodes)
        a = [
            [mpmath.power(mpmath.mpf(nodes[i]), mpmath.mpf(exps[j]) - base)
             for j in range(n)]
            for i in range(n)
        ]
        sign = 1
        for col in range(n - 1):
            piv = max(range(col, n), key=lambda r: abs(a[r][col]))
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                sign = -sign
            if a[col][col] == 0:
                return 0, mpmath.mpf(0)
            for r in range(col + 1, n):
                factor = a[r][col] / a[col][col]
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
        logdet = mpmath.mpf(0)
        for i in range(n):
            d = a[i][i]
            if d == 0:
                return 0, mpmath.mpf(0)
            if d < 0:
                sign = -sign
                d = -d
            logdet += mpmath.log(d, 10)
        return sign, logdet


def gen_vandermonde_det(t: NodeVector, p, extended: str = "auto") -> float:
    """det(t_i^{p_j}) for increasing nodes t and increasing real exponents p.

    Strictly positive in exact arithmetic.  Rows are scaled by t_i^{p_1}
    before factorization; if the pivot spread still indicates fewer than 3
    trustworthy digits the determinant is recomputed at 50 digits (sizes up
    to 6) or IllConditioned is raised.  extended: 'auto', 'never', 'force'.
    """
    if not isinstance(t, NodeVector):
        t = NodeVector(tuple(t))
    exps = tuple(float(x) for x in p)
    if len(exps) != len(t):
        raise DomainError("need as many exponents as nodes")
    if any(exps[i] >= exps[i + 1] for i in range(len(exps) - 1)):
        raise DomainError(f"exponents must strictly increase, got {exps}")
    if extended not in ("auto", "never", "force"):
        raise DomainError(f"bad extended mode {extended!r}")
    base = exps[0]
    ln_row_scale = base * sum(math.log(ti) for ti in t)
    use_extended = extended == "force"
    det_scaled = None
    if not use_extended:
        lu, sign, trust = _lu_factor(_scaled_power_matrix(t.nodes, exps, base))
        if trust >= _MIN_TRUST_DIGITS and sign != 0.0:
            diag = np.diag(lu)
            if np.sum(diag < 0.0) % 2:
                sign = -sign
            logdet = float(np.sum(np.log(np.abs(diag))))
            det_scaled = (sign, logdet)
        elif extended == "never" or len(t) > _EXTENDED_MAX_SIZE:
            raise IllConditioned(
                f"Vandermonde LU keeps ~{max(trust, 0.0):.1f} digits; "
                "extended precision unavailable"
            )
        else:
            use_extended = True
    if use_extended:
        sign, log10det = _extended_det_sign_log(t.nodes, exps, base)
        if sign == 0:
            raise IllConditioned("extended-precision determinant vanished")
        det_scaled = (float(sign), float(log10det) * math.log(10.0))
    sign, logdet = det_scaled
    return sign * math.exp(logdet + ln_row_scale)


@dataclass(frozen=True)
class SeparatorCoeffs:
    """h(t) = t^p_target + sum_i c_i t^{p_i}, vanishing at the given nodes.

    p_target is the last entry of the exponent tuple; the remaining entries
    align with coefficients.  With k nodes the zeros are exactly the nodes
    and every zero is a sign crossing.
    """

    nodes: tuple
    exponents: tuple  # full tuple, target last
    coefficients: tuple
    max_exponent_coeff_sign: int
    parity_consistent: bool

    def value(self, t: float) -> float:
        exps = self.exponents
        h = t ** exps[-1]
        for c, pe in zip(self.coefficients, exps[:-1]):
            h += c * t**pe
        return h


def _solve_power_system(nodes, base_exps, target_exp):
    """Coefficients c with sum_i c_i t^{p_i} = -t^p_target at every node."""
    t = np.asarray(nodes, dtype=float)
    a = np.power.outer(t, np.asarray(base_exps) - target_exp)
    rhs = -np.ones(len(nodes))
    lu, sign, trust = _lu_factor(a)
    if trust >= _MIN_TRUST_DIGITS and sign != 0.0:
        return np.linalg.solve(a, rhs), trust
    if len(nodes) > _EXTENDED_MAX_SIZE:
        raise IllConditioned(
            f"separator system keeps ~{max(trust, 0.0):.1f} digits; "
            "extended precision unavailable"
        )
    import mpmath

    with mpmath.workdps(_EXTENDED_DPS):
        mat = mpmath.matrix(
            [
                [mpmath.power(mpmath.mpf(ti), mpmath.mpf(pe) - target_exp)
                 for pe in base_exps]
                for ti in t
            ]
        )
        sol = mpmath.lu_solve(mat, mpmath.matrix([-1] * len(nodes)))
        return np.array([float(x) for x in sol]), float(_EXTENDED_DPS)


def separator(t: NodeVector, p: ExponentTuple) -> SeparatorCoeffs:
    """Power sum with unit coefficient on the last exponent, zeros at t.

    Needs len(p) = len(t) + 1.  The sign of the coefficient on the largest
    exponent is reported and cross-checked against the crossing parity
    (sign at infinity must equal the sign at 0+ times (-1)^k).
    """
    if not isinstance(t, NodeVector):
        t = NodeVector(tuple(t))
    if not isinstance(p, ExponentTuple):
        p = ExponentTuple(tuple(p))
    if len(p) != len(t) + 1:
        raise DomainError("separator needs one more exponent than nodes")
    target = p[len(p) - 1]
    base = p.exponents[:-1]
    coeffs, _ = _solve_power_system(t.nodes, base, target)

    full = list(zip(base + (target,), tuple(coeffs) + (1.0,)))
    _, c_max = max(full, key=lambda pc: pc[0])
    _, c_min = min(full, key=lambda pc: pc[0])
    sign_inf = 1 if c_max > 0 else -1
    sign_zero = 1 if c_min > 0 else -1
    consistent = sign_inf == sign_zero * (-1) ** (len(t) % 2)
    return SeparatorCoeffs(
        nodes=t.nodes,
        exponents=tuple(p),
        coefficients=tuple(float(c) for c in coeffs),
        max_exponent_coeff_sign=sign_inf,
        parity_consistent=bool(consistent),
    )


# ---------------------------------------------------------------------------
# sign changes of a black-box function on (0, bound)

@dataclass(frozen=True)
class SignChangeReport:
    count: int
    locations: tuple
    refined: bool


def _scan_grid(bound: float, cells: int) -> np.ndarray:
    """Geometric coverage of the decades near 0, uniform coverage above."""
    half = cells // 2
    lo = bound * 1.0e-8
    geo = np.geomspace(lo, bound / 2.0, half, endpoint=False)
    uni = np.linspace(bound / 2.0, bound, cells - half)
    return np.concatenate([geo, uni])


def sign_changes(
    fn,
    bound: float,
    expected_max: int | None = None,
    band_rel_tol: float = _BAND_REL_TOL,
) -> SignChangeReport:
    """Count strict sign crossings of fn on (0, bound).

    Samples a hybrid geometric+uniform grid (4096 cells), classifies
    near-zero samples into bands relative to the local scale, bisects each
    bracketing cell, and re-runs once at 4x resolution if the count exceeds
    expected_max.  A zero band that cannot be classified (touching the scan
    boundary, or wider than a quarter of the grid) raises UnresolvedBand.
    """
    if not (0.0 < bound < math.inf):
        raise DomainError(f"scan bound must be positive finite, got {bound!r}")

    def run(cells: int):
        ts = _scan_grid(bound, cells)
        vals = np.array([fn(t) for t in ts], dtype=float)
        if np.any(~np.isfinite(vals)):
            raise DomainError("sign scan hit a non-finite value")
        absv = np.abs(vals)
        if not absv.any():
            return []  # identically zero at scan resolution: nothing crosses
        # local scale: running window maximum, so a function tiny on one
        # decade and huge on another is banded per-decade
        win = max(cells // 64, 8)
        local = np.array(
            [absv[max(0, i - win) : i + win + 1].max() for i in range(len(absv))]
        )
        local[local == 0.0] = 1.0
        near_zero = absv <= band_rel_tol * local

        crossings = []
        state = 0  # last confirmed sign
        band_start = None
        for i, t in enumerate(ts):
            if near_zero[i]:
                if band_start is None:
                    band_start = i
                continue
            s = 1 if vals[i] > 0 else -1
            if band_start is not None:
                width = i - band_start
                if width > cells // 4:
                    raise UnresolvedBand(
                        f"zero band spans {width} of {cells} cells near "
                        f"t ~ {ts[band_start]:.6g}"
                    )
                if state != 0 and s != state:
                    crossings.append(0.5 * (ts[band_start] + ts[i]))
                band_start = None
                state = s
                continue
            if state != 0 and s != state:
                # bracketed crossing: bisect [ts[i-1], ts[i]]
                a, b = ts[i - 1], ts[i]
                fa = vals[i - 1]
                for _ in range(_BISECT_STEPS):
                    mid = 0.5 * (a + b)
                    fm = fn(mid)
                    if fm == 0.0:
                        a = b = mid
                        break
                    if (fm > 0) == (fa > 0):
                        a, fa = mid, fm
                    else:
                        b = mid
                crossings.append(0.5 * (a + b))
            state = s
        if band_start is not None:
            raise UnresolvedBand(
                f"zero band touches the scan boundary near t ~ {ts[band_start]:.6g}"
            )
        return crossings

    crossings = run(_GRID_CELLS)
    refined = False
    if expected_max is not None and len(crossings) > expected_max:
        crossings = run(_GRID_CELLS * 4)
        refined = True
    return SignChangeReport(
        count=len(crossings), locations=tuple(crossings), refined=refined
    )


# ---------------------------------------------------------------------------
# parity rule

class EnvelopeOrientation(enum.Enum):
    MAX_IS_PLUS = "max_is_plus"
    MAX_IS_MINUS = "max_is_minus"

    @property
    def max_sign(self) -> Sign:
        return Sign.PLUS if self is EnvelopeOrientation.MAX_IS_PLUS else Sign.MINUS

    @property
    def min_sign(self) -> Sign:
        return Sign.MINUS if self is EnvelopeOrientation.MAX_IS_PLUS else Sign.PLUS


def parity_rule(p: ExponentTuple) -> EnvelopeOrientation:
    """Which extremal sign maximizes the last moment given all previous ones.

    With k the 1-based rank of the final exponent among all of them and N the
    tuple length, the plus extremal gives the maximum iff N - k is even.
    """
    if not isinstance(p, ExponentTuple):
        p = ExponentTuple(tuple(p))
    if len(p) < 2:
        raise DomainError("parity rule needs at least two exponents")
    k = p.rank_of_last()
    if (len(p) - k) % 2 == 0:
        return EnvelopeOrientation.MAX_IS_PLUS
    return EnvelopeOrientation.MAX_IS_MINUS
