"""Sharp next-moment envelopes over prescribed moment constraints."""

import math

import numpy as np
import pytest

from helpers import random_exponents, random_member, random_potential
from logmoment.chebyshev import EnvelopeOrientation
from logmoment.core import Sign, SimpleLogConcaveFn, fn_equal
from logmoment.envelope import (
    EnvelopeGridRow,
    body_contains,
    envelope,
    envelope_grid,
    grid_csv_lines,
)
from logmoment.errors import DomainError, Infeasible
from logmoment.inverse import Feasibility
from logmoment.moments import ExponentTuple, MomentVector, moment, moment_map

THIRD = 1.0 / 3.0


def test_envelope_mass_one_second_moment():
    # prescribing m_0 = 1 and reading m_2: indicator on [0,1] gives the
    # minimum 1/3, the unit exponential the maximum 2
    res = envelope(ExponentTuple((0.0, 2.0)), MomentVector((1.0,)))
    assert res.parity is EnvelopeOrientation.MAX_IS_PLUS
    assert res.lo == pytest.approx(THIRD, rel=1e-9)
    assert res.hi == pytest.approx(2.0, rel=1e-9)
    assert fn_equal(res.argmin, SimpleLogConcaveFn(1, "-", (), (1.0,)), rel_tol=1e-8)
    assert fn_equal(res.argmax, SimpleLogConcaveFn(1, "+", (1.0,), ()), rel_tol=1e-8)


def test_envelope_reversed_exponent_order():
    # prescribing m_2 = 1/3 and reading m_0 flips the parity: the indicator
    # realizes the top and the exponential 6^(-1/3) e^(-6^(1/3) t) the bottom
    res = envelope(ExponentTuple((2.0, 0.0)), MomentVector((THIRD,)))
    assert res.parity is EnvelopeOrientation.MAX_IS_MINUS
    assert res.lo == pytest.approx(6.0 ** (-THIRD), rel=1e-9)
    assert res.hi == pytest.approx(1.0, rel=1e-9)


def test_envelope_endpoints_are_realized():
    rng = np.random.default_rng(307)
    for _ in range(5):
        f = random_member(rng, 2, "+")
        exps = sorted(random_exponents(rng, 3))
        p = ExponentTuple(tuple(exps))
        constraints = moment_map(f, p.prefix(2))
        res = envelope(p, constraints)
        # endpoint moments match the extremal functions exactly
        assert moment(res.argmin, p[-1]) == pytest.approx(res.lo, rel=1e-12)
        assert moment(res.argmax, p[-1]) == pytest.approx(res.hi, rel=1e-12)
        # the extremals satisfy the constraints
        for g in (res.argmin, res.argmax):
            got = moment_map(g, p.prefix(2))
            for a, b in zip(got, constraints):
                assert a == pytest.approx(b, rel=1e-7)
        assert res.argmin.sign is res.parity.min_sign
        assert res.argmax.sign is res.parity.max_sign


def test_envelope_sandwiches_random_functions():
    rng = np.random.default_rng(311)
    hits = 0
    for _ in range(10):
        f = random_potential(rng)
        exps = random_exponents(rng, 3)
        p = ExponentTuple(exps)
        constraints = moment_map(f, p.prefix(2))
        res = envelope(p, constraints)
        value = moment(f, p[-1])
        scale = max(abs(res.lo), abs(res.hi))
        assert res.lo - 1e-8 * scale <= value <= res.hi + 1e-8 * scale
        hits += 1
    assert hits == 10


def test_envelope_boundary_collapse():
    # constraints achievable only by the indicator leave a width-zero window
    p = ExponentTuple((0.0, 2.0, 4.0))
    res = envelope(p, MomentVector((1.0, THIRD)))
    assert res.lo == pytest.approx(0.2, rel=1e-6)
    assert res.hi == pytest.approx(0.2, rel=1e-6)
    assert res.hi >= res.lo


def test_envelope_infeasible_raises():
    with pytest.raises(Infeasible):
        envelope(ExponentTuple((0.0, 2.0, 4.0)), MomentVector((1.0, 3.0)))
    with pytest.raises(DomainError):
        envelope(ExponentTuple((0.0, 2.0)), MomentVector((1.0, 2.0)))


def test_body_contains_verdicts():
    p = ExponentTuple((0.0, 2.0))
    inner = body_contains(p, MomentVector((1.0, 0.5)))
    assert inner.verdict is Feasibility.INTERIOR
    edge = body_contains(p, MomentVector((1.0, THIRD)))
    assert edge.verdict is Feasibility.BOUNDARY
    outside = body_contains(p, MomentVector((1.0, 3.0)))
    assert outside.verdict is Feasibility.INFEASIBLE


def test_envelope_grid_statuses_and_csv():
    p = ExponentTuple((0.0, 2.0))
    rows = envelope_grid(p, 0, [(1.0,), (1.0e3,), (0.2,)])
    assert [r.status for r in rows] == ["ok", "ok", "ok"]
    # m_2 window scales with the cube of the mass (homogeneity degree 3)
    base = rows[0]
    big = rows[1]
    assert big.lo == pytest.approx(base.lo * 1.0e9, rel=1e-6)
    assert big.hi == pytest.approx(base.hi * 1.0e9, rel=1e-6)

    p3 = ExponentTuple((0.0, 2.0, 4.0))
    mixed = envelope_grid(p3, 1, [(1.0, 0.5), (1.0, 3.0)])
    assert mixed[0].status == "ok"
    assert mixed[1].status == "infeasible"
    assert math.isnan(mixed[1].lo) and math.isnan(mixed[1].hi)

    lines = grid_csv_lines(2, mixed)
    assert lines[0] == "m_1,m_2,lo,hi,status"
    assert lines[1].endswith(",ok")
    assert lines[2].endswith(",infeasible")
    assert len(lines) == 3


def test_envelope_grid_validation():
    p = ExponentTuple((0.0, 2.0))
    with pytest.raises(DomainError):
        envelope_grid(p, 1, [(1.0,)])  # axis out of range
    with pytest.raises(DomainError):
        envelope_grid(p, 0, [(1.0, 2.0)])  # wrong arity
    with pytest.raises(DomainError):
        envelope_grid(ExponentTuple((2.0,)), 0, [(1.0,)])


def test_envelope_grid_boundary_status():
    p = ExponentTuple((0.0, 2.0, 4.0))
    rows = envelope_grid(p, 1, [(1.0, THIRD), (1.0, 0.5)])
    assert rows[0].status == "boundary"
    assert rows[1].status == "ok"
    assert rows[1].hi > rows[1].lo
