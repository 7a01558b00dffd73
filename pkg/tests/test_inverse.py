"""Moment inversion: closed-form oracles, round trips, determinism, status."""

import math

import numpy as np
import pytest

from helpers import random_exponents, random_member
from logmoment.core import (
    CONSTANT_ONE,
    POINT_INDICATOR,
    Sign,
    SimpleLogConcaveFn,
    canonicalize,
    fn_equal,
)
from logmoment.errors import DomainError
from logmoment.inverse import (
    Feasibility,
    SolveStatus,
    SolverConfig,
    feasibility,
    from_internal_coords,
    internal_coords,
    match_moments,
    solve_pair,
)
from logmoment.moments import ExponentTuple, MomentVector, moment, moment_map
from logmoment.specfun import gamma


def test_order_one_closed_forms():
    # minus family: indicator with cutoff b has m_p = b^(p+1)/(p+1)
    for p, target in ((0.0, 0.7), (2.0, 1.9), (5.5, 0.02)):
        rep = match_moments(ExponentTuple((p,)), MomentVector((target,)), "-")
        assert rep.status is SolveStatus.CONVERGED
        b = ((p + 1.0) * target) ** (1.0 / (p + 1.0))
        want = SimpleLogConcaveFn(1, "-", (), (b,))
        assert fn_equal(rep.solution, want, rel_tol=1e-10)
        assert rep.residual <= 1e-10

    # plus family: exp(-a t) has m_p = Gamma(p+1) / a^(p+1)
    for p, target in ((0.0, 0.7), (2.0, 1.9), (5.5, 0.02)):
        rep = match_moments(ExponentTuple((p,)), MomentVector((target,)), "+")
        assert rep.status is SolveStatus.CONVERGED
        a = (gamma(p + 1.0) / target) ** (1.0 / (p + 1.0))
        want = SimpleLogConcaveFn(1, "+", (a,), ())
        assert fn_equal(rep.solution, want, rel_tol=1e-10)


def test_round_trip_low_orders():
    rng = np.random.default_rng(211)
    for order in (1, 2, 3, 4):
        for sign in ("+", "-"):
            for _ in range(3):
                f = random_member(rng, order, sign)
                p = ExponentTuple(random_exponents(rng, order))
                targets = moment_map(f, p)
                rep = match_moments(p, targets, sign)
                assert rep.status is SolveStatus.CONVERGED, rep.message
                got = moment_map(rep.solution, p)
                for a, b in zip(got, targets):
                    assert a == pytest.approx(b, rel=1e-8)
                assert fn_equal(rep.solution, f, rel_tol=1e-6, abs_tol=1e-8)


def test_both_signs_hit_the_same_moments():
    rng = np.random.default_rng(223)
    f = random_member(rng, 3, "+")
    p = ExponentTuple((0.0, 1.0, 2.0))
    targets = moment_map(f, p)
    outcome = solve_pair(p, targets)
    plus = outcome.reports[Sign.PLUS]
    minus = outcome.reports[Sign.MINUS]
    assert plus.status is SolveStatus.CONVERGED
    assert minus.status is SolveStatus.CONVERGED
    assert plus.solution.sign is Sign.PLUS
    assert minus.solution.sign is Sign.MINUS
    for rep in (plus, minus):
        got = moment_map(rep.solution, p)
        for a, b in zip(got, targets):
            assert a == pytest.approx(b, rel=1e-8)
    # the two extremal functions are genuinely different
    assert not fn_equal(plus.solution, minus.solution, rel_tol=1e-4)


def test_boundary_target_detected():
    # (m_0, m_2) = (1, 1/3) is realized only by the unit indicator
    p = ExponentTuple((0.0, 2.0))
    targets = MomentVector((1.0, 1.0 / 3.0))
    rep = match_moments(p, targets, "+")
    assert rep.status is SolveStatus.CONVERGED_ON_BOUNDARY
    assert fn_equal(rep.solution, SimpleLogConcaveFn(1, "-", (), (1.0,)), rel_tol=1e-6)
    report = feasibility(p, targets)
    assert report.verdict is Feasibility.BOUNDARY
    assert report.witness is not None


def test_infeasible_target_detected():
    # above the sharp bound m_2 <= C * m_0^3 with C = max over the body
    p = ExponentTuple((0.0, 2.0))
    targets = MomentVector((1.0, 3.0))
    rep = match_moments(p, targets, "+")
    assert rep.status is SolveStatus.INFEASIBLE
    assert rep.solution is None
    assert feasibility(p, targets).verdict is Feasibility.INFEASIBLE
    # far below the lower envelope is just as infeasible
    targets = MomentVector((1.0, 1.0e-6))
    assert feasibility(p, targets).verdict is Feasibility.INFEASIBLE


def test_degenerate_targets():
    p = ExponentTuple((0.0, 2.0))
    rep = feasibility(p, MomentVector((0.0, 0.0)))
    assert rep.verdict is Feasibility.BOUNDARY
    assert fn_equal(rep.witness, POINT_INDICATOR)
    rep = feasibility(p, MomentVector((math.inf, math.inf)))
    assert rep.verdict is Feasibility.BOUNDARY
    assert fn_equal(rep.witness, CONSTANT_ONE)
    out = solve_pair(p, MomentVector((0.0, 0.0)))
    for sign in (Sign.PLUS, Sign.MINUS):
        assert out.reports[sign].status is SolveStatus.CONVERGED_ON_BOUNDARY


def test_permuted_exponent_orders_agree():
    rng = np.random.default_rng(227)
    for _ in range(6):
        f = random_member(rng, 3, "-")
        exps = random_exponents(rng, 3)
        targets = moment_map(f, ExponentTuple(exps))
        perm = [2, 0, 1]
        exps2 = tuple(exps[i] for i in perm)
        targets2 = MomentVector(tuple(targets[i] for i in perm))
        rep1 = match_moments(ExponentTuple(exps), targets, "-")
        rep2 = match_moments(ExponentTuple(exps2), targets2, "-")
        assert rep1.status is SolveStatus.CONVERGED
        assert rep2.status is SolveStatus.CONVERGED
        c1, c2 = canonicalize(rep1.solution), canonicalize(rep2.solution)
        assert c1.order == c2.order and c1.sign is c2.sign
        for a, b in zip(c1.slopes + c1.knots, c2.slopes + c2.knots):
            assert a == pytest.approx(b, rel=1e-6, abs=1e-9)


def test_solver_is_deterministic():
    f = random_member(np.random.default_rng(229), 4, "+")
    p = ExponentTuple((0.5, 2.0, 3.5, 5.0))
    targets = moment_map(f, p)
    rep1 = match_moments(p, targets, "+")
    rep2 = match_moments(p, targets, "+")
    assert rep1.solution == rep2.solution  # bitwise equal parameters
    assert rep1.iterations == rep2.iterations
    assert rep1.residual == rep2.residual


def test_internal_coords_round_trip():
    rng = np.random.default_rng(233)
    for order in (1, 2, 3, 4, 5):
        for sign in ("+", "-"):
            f = random_member(rng, order, sign)
            g = from_internal_coords(internal_coords(f))
            assert fn_equal(f, g, rel_tol=1e-12)


def test_solver_config_validation():
    SolverConfig()
    with pytest.raises(DomainError):
        SolverConfig(rel_tol=0.0)
    with pytest.raises(DomainError):
        SolverConfig(rel_tol=0.5)
    with pytest.raises(DomainError):
        SolverConfig(max_iter=0)
    with pytest.raises(DomainError):
        SolverConfig(damping_floor=2.0)
    with pytest.raises(DomainError):
        SolverConfig(fd_step=1.0)
    with pytest.raises(DomainError):
        SolverConfig(boundary_tol=0.0)


def test_input_validation():
    p = ExponentTuple((0.0, 2.0))
    with pytest.raises(DomainError):
        match_moments(p, MomentVector((1.0,)), "+")  # length mismatch
    with pytest.raises(DomainError):
        match_moments(ExponentTuple(tuple(np.linspace(0, 13, 14))),
                      MomentVector(tuple(np.ones(14))), "+")
    with pytest.raises(DomainError):
        match_moments(p, MomentVector((1.0, 0.3)), "x")


def test_custom_tolerance_is_respected():
    f = random_member(np.random.default_rng(239), 2, "+")
    p = ExponentTuple((1.0, 3.0))
    targets = moment_map(f, p)
    loose = match_moments(p, targets, "+", SolverConfig(rel_tol=1e-4))
    tight = match_moments(p, targets, "+", SolverConfig(rel_tol=1e-12))
    assert loose.status is SolveStatus.CONVERGED
    assert tight.status is SolveStatus.CONVERGED
    got = moment_map(tight.solution, p)
    for a, b in zip(got, targets):
        assert a == pytest.approx(b, rel=1e-11)
