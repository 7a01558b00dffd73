"""Generalized Vandermonde determinants, separators, sign scans, parity."""

import math

import numpy as np
import pytest

from helpers import random_member
from logmoment.chebyshev import (
    EnvelopeOrientation,
    NodeVector,
    SeparatorCoeffs,
    gen_vandermonde_det,
    parity_rule,
    separator,
    sign_changes,
)
from logmoment.core import Sign, eval_fn
from logmoment.errors import DomainError, UnresolvedBand
from logmoment.moments import ExponentTuple, moment


def test_vandermonde_small_closed_forms():
    assert gen_vandermonde_det((1.0, 2.0), (0.0, 1.0)) == pytest.approx(1.0, rel=1e-12)
    # classic case: product of node differences
    assert gen_vandermonde_det((1.0, 2.0, 3.0), (0.0, 1.0, 2.0)) == pytest.approx(
        2.0, rel=1e-12
    )
    # fractional exponent: rows (1, 1) and (1, 4^0.5) give det 1
    assert gen_vandermonde_det((1.0, 4.0), (0.0, 0.5)) == pytest.approx(1.0, rel=1e-12)
    assert gen_vandermonde_det((2.5,), (1.3,)) == pytest.approx(2.5**1.3, rel=1e-12)


def test_vandermonde_validation():
    with pytest.raises(DomainError):
        gen_vandermonde_det((1.0, 2.0), (0.0,))
    with pytest.raises(DomainError):
        gen_vandermonde_det((2.0, 1.0), (0.0, 1.0))  # nodes must increase
    with pytest.raises(DomainError):
        gen_vandermonde_det((1.0, 2.0), (1.0, 0.0))  # exponents must increase
    with pytest.raises(DomainError):
        gen_vandermonde_det((0.0, 1.0), (0.0, 1.0))  # nodes must be positive
    with pytest.raises(DomainError):
        gen_vandermonde_det((1.0, 2.0), (0.0, 1.0), extended="maybe")


def test_vandermonde_positive_on_random_instances():
    rng = np.random.default_rng(71)
    for _ in range(300):
        k = int(rng.integers(1, 7))
        nodes = tuple(np.sort(rng.uniform(0.05, 50.0, k)))
        exps = tuple(np.sort(rng.uniform(-0.9, 10.0, k)))
        if min(np.diff(nodes), default=1.0) < 1e-6:
            continue
        if min(np.diff(exps), default=1.0) < 1e-6:
            continue
        assert gen_vandermonde_det(nodes, exps) > 0.0


def test_vandermonde_extended_agrees_with_plain():
    # well-conditioned instance evaluated both ways
    nodes, exps = (0.5, 1.3, 2.9), (0.2, 1.7, 4.0)
    plain = gen_vandermonde_det(nodes, exps, extended="never")
    forced = gen_vandermonde_det(nodes, exps, extended="force")
    assert plain == pytest.approx(forced, rel=1e-10)


def test_separator_closed_forms():
    # one node at 1, exponents (0, 2): h(t) = t^2 - 1
    sep = separator((1.0,), ExponentTuple((0.0, 2.0)))
    assert sep.coefficients == pytest.approx((-1.0,), abs=1e-12)
    assert sep.max_exponent_coeff_sign == 1
    assert sep.parity_consistent

    # nodes 1, 2 with exponents (0, 1, 2): h(t) = (t-1)(t-2) = t^2 - 3t + 2
    sep = separator((1.0, 2.0), ExponentTuple((0.0, 1.0, 2.0)))
    assert sep.coefficients == pytest.approx((2.0, -3.0), abs=1e-10)

    # fractional target below the base exponent: h(t) = t^0.5 - t
    sep = separator((1.0,), ExponentTuple((1.0, 0.5)))
    assert sep.coefficients == pytest.approx((-1.0,), abs=1e-12)
    assert sep.value(0.5) > 0.0 and sep.value(2.0) < 0.0


def test_separator_vanishes_and_crosses_at_nodes():
    rng = np.random.default_rng(73)
    for _ in range(40):
        k = int(rng.integers(1, 5))
        nodes = tuple(np.sort(rng.uniform(0.3, 4.0, k)))
        if min(np.diff(nodes), default=1.0) < 0.15:
            continue
        exps = np.sort(rng.uniform(-0.5, 7.0, k + 1))
        if min(np.diff(exps)) < 0.3:
            continue
        rng.shuffle(exps[:-0 or None])  # keep it a valid tuple, order free
        sep = separator(nodes, ExponentTuple(tuple(exps)))
        scale = max(abs(c) for c in sep.coefficients + (1.0,))
        for t in nodes:
            assert abs(sep.value(t)) <= 1e-9 * scale * max(1.0, t ** exps[-1])
        report = sign_changes(sep.value, bound=2.0 * nodes[-1] + 2.0, expected_max=k)
        assert report.count == k
        for loc, node in zip(report.locations, nodes):
            assert loc == pytest.approx(node, abs=2e-3 * (nodes[-1] + 1.0))


def test_separator_validation():
    with pytest.raises(DomainError):
        separator((1.0, 2.0), ExponentTuple((0.0, 1.0)))  # needs k+1 exponents


def test_sign_changes_examples():
    report = sign_changes(
        lambda t: math.exp(-t) - (1.0 if t <= 1.0 else 0.0), bound=4.0
    )
    assert report.count == 1
    assert report.locations[0] == pytest.approx(1.0, abs=1e-2)

    # a function minus itself scans as identically zero
    f = random_member(np.random.default_rng(3), 3, "+")
    report = sign_changes(lambda t: eval_fn(f, t) - eval_fn(f, t), bound=3.0)
    assert report.count == 0

    with pytest.raises(DomainError):
        sign_changes(lambda t: 1.0, bound=0.0)
    with pytest.raises(DomainError):
        sign_changes(lambda t: math.nan, bound=1.0)


def test_sign_changes_two_density_crossings():
    # one-sided densities proportional to exp(-t^q), scaled to unit mean
    def scaled_density(q):
        norm = q / math.gamma(1.0 / q)
        mean = math.gamma(2.0 / q) / math.gamma(1.0 / q)
        return lambda t: mean * norm * math.exp(-((mean * t) ** q))

    phi2, phi4 = scaled_density(2.0), scaled_density(4.0)
    report = sign_changes(lambda t: phi2(t) - phi4(t), bound=8.0, expected_max=2)
    assert report.count == 2
    assert not report.refined


def test_sign_changes_unresolved_band():
    # genuinely ambiguous: zero on a macroscopic region, no crossing info
    with pytest.raises(UnresolvedBand):
        sign_changes(lambda t: max(0.0, t - 1.0), bound=3.0)


def test_sign_changes_same_class_difference_cap():
    # two members of one family differ with at most order-1 crossings
    rng = np.random.default_rng(79)
    for order in (2, 3, 4):
        for _ in range(6):
            f = random_member(rng, order, "+")
            g = random_member(rng, order, "+")
            diff = lambda t: eval_fn(f, t) - eval_fn(g, t)
            try:
                report = sign_changes(diff, bound=40.0, expected_max=order - 1)
            except UnresolvedBand:
                continue
            assert report.count <= order - 1


def test_node_vector_validation():
    NodeVector((0.5, 1.0, 2.0))
    with pytest.raises(DomainError):
        NodeVector((1.0, 1.0))
    with pytest.raises(DomainError):
        NodeVector((-1.0, 2.0))
    with pytest.raises(DomainError):
        NodeVector(())


def test_parity_rule_examples():
    assert parity_rule(ExponentTuple((0.0, 2.0))) is EnvelopeOrientation.MAX_IS_PLUS
    assert parity_rule(ExponentTuple((2.0, 0.0))) is EnvelopeOrientation.MAX_IS_MINUS
    assert (
        parity_rule(ExponentTuple((0.0, 1.0, 2.0))) is EnvelopeOrientation.MAX_IS_PLUS
    )
    assert (
        parity_rule(ExponentTuple((0.0, 2.0, 1.0))) is EnvelopeOrientation.MAX_IS_MINUS
    )
    with pytest.raises(DomainError):
        parity_rule(ExponentTuple((2.0,)))


def test_parity_orientation_signs():
    assert EnvelopeOrientation.MAX_IS_PLUS.max_sign is Sign.PLUS
    assert EnvelopeOrientation.MAX_IS_PLUS.min_sign is Sign.MINUS
    assert EnvelopeOrientation.MAX_IS_MINUS.max_sign is Sign.MINUS
    assert EnvelopeOrientation.MAX_IS_MINUS.min_sign is Sign.PLUS


def test_integral_orthogonality_against_separator():
    # h vanishing at the crossings of f - g makes h * (f - g) single-signed,
    # so the integral is bounded away from zero for distinct functions
    f = random_member(np.random.default_rng(1), 3, "+")
    g = random_member(np.random.default_rng(5), 3, "+")
    diff = lambda t: eval_fn(f, t) - eval_fn(g, t)
    report = sign_changes(diff, bound=40.0, expected_max=2)
    assert report.count == 2
    exps = ExponentTuple(tuple(range(report.count + 1)))
    sep = separator(tuple(report.locations), exps)

    ts = np.linspace(1e-6, 40.0, 400001)
    vals = np.array([sep.value(t) * diff(t) for t in ts])
    integral = float(np.trapezoid(vals, ts))
    assert abs(integral) > 1e-6
    # the product never strays past sign-scan noise on the wrong side
    pos, neg = vals.max(), vals.min()
    small = 1e-8 * max(abs(pos), abs(neg))
    assert pos <= small or neg >= -small
