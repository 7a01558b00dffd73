"""Extended nonnegative reals: [0, inf] with the convention inf * 0 = 0.

Values are plain floats (math.inf for the point at infinity); this module only
adds the handful of operations where IEEE semantics would produce a NaN or the
wrong branch.  Keeping the representation primitive means numpy interop and
JSON round-trips stay trivial.
"""

from __future__ import annotations

import math

from .errors import DomainError

INF = math.inf


def is_ext(x: float) -> bool:
    """True for a valid extended nonnegative real (0 <= x <= inf, not NaN)."""
    return isinstance(x, (int, float)) and not math.isnan(x) and x >= 0.0


def require_ext(x: float, what: str = "value") -> float:
    if not is_ext(x):
        raise DomainError(f"{what} must lie in [0, inf], got {x!r}")
    return float(x)


def xmul(a: float, b: float) -> float:
    """Product on [0, inf] with inf * 0 = 0 (measure-theoretic convention)."""
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def xsub_nonneg(a: float, b: float) -> float:
    """a - b for 0 <= b <= a <= inf, with inf - finite = inf."""
    if a == INF:
        if b == INF:
            raise DomainError("inf - inf is undefined")
        return INF
    if b > a:
        raise DomainError(f"difference would be negative: {a} - {b}")
    return a - b


def fmt_ext(x: float) -> str:
    """Render for messages: 'inf' instead of float('inf') repr."""
    return "inf" if x == INF else repr(float(x))


def to_json_value(x: float):
    """JSON encoding: finite floats pass through, infinity becomes 'inf'."""
    return "inf" if x == INF else float(x)


def from_json_value(v) -> float:
    """Inverse of to_json_value; accepts 'inf' (case-insensitive) or a number."""
    if isinstance(v, str):
        if v.strip().lower() in ("inf", "infinity", "+inf"):
            return INF
        raise DomainError(f"cannot parse extended real from {v!r}")
    return require_ext(float(v))
