"""Random generators shared across test modules.

Members are drawn with one knot per bin of a fixed window and one exponent
per bin of (-0.9, 8): still random, but keeps the instances identifiable at
double precision (clustered knots or exponent gaps below ~1e-1 produce
moment maps whose condition number exceeds what any double-precision solver
can invert).
"""

import numpy as np

from logmoment.core import PotentialSpec, Sign, SimpleLogConcaveFn, _template_shape

KNOT_WINDOW = (0.15, 2.65)
SLOPE_WINDOW = (0.25, 3.0)
EXP_WINDOW = (-0.9, 8.0)


def random_member(rng, order, sign) -> SimpleLogConcaveFn:
    sign = Sign.coerce(sign)
    n_slopes, n_knots, _, _ = _template_shape(order, sign)
    slopes = tuple(float(v) for v in rng.uniform(*SLOPE_WINDOW, n_slopes))
    width = (KNOT_WINDOW[1] - KNOT_WINDOW[0]) / n_knots if n_knots else 0.0
    knots = tuple(
        KNOT_WINDOW[0] + (i + 0.1 + 0.8 * float(rng.uniform())) * width
        for i in range(n_knots)
    )
    return SimpleLogConcaveFn(order=order, sign=sign, slopes=slopes, knots=knots)


def random_exponents(rng, n, window=EXP_WINDOW, shuffle=True) -> tuple:
    lo, hi = window
    width = (hi - lo) / n
    p = [lo + (i + 0.1 + 0.8 * float(rng.uniform())) * width for i in range(n)]
    if shuffle:
        rng.shuffle(p)
    return tuple(p)


def random_potential(rng, max_pieces=4) -> PotentialSpec:
    k = int(rng.integers(1, max_pieces + 1))
    knots = np.concatenate([[0.0], np.sort(rng.uniform(0.1, 2.2, k - 1))])
    slopes = np.sort(rng.uniform(0.0, 3.0, k))
    cutoff = np.inf
    if rng.uniform() < 0.4:
        cutoff = float(knots[-1] + rng.uniform(0.3, 2.0))
    elif slopes[-1] < 0.2:
        slopes[-1] += 0.5  # keep the tail integrable when there is no cutoff
    pieces = tuple((float(s), float(b)) for s, b in zip(slopes, knots))
    return PotentialSpec(pieces=pieces, cutoff=cutoff)
