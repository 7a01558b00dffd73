"""Representations: families, evaluation, canonical forms, embeddings, JSON."""

import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from helpers import random_member, random_potential
from logmoment.core import (
    CONSTANT_ONE,
    POINT_INDICATOR,
    PotentialSpec,
    Sign,
    SimpleClass,
    SimpleLogConcaveFn,
    _template_shape,
    any_fn_from_json,
    canonicalize,
    distance,
    embed,
    eval_fn,
    eval_grid,
    fn_equal,
    fn_from_json,
    fn_to_json,
    jump_form,
    potential_from_json,
    potential_to_json,
    segments,
    support_bound,
)
from logmoment.errors import DomainError, NotEmbeddable

INF = math.inf

# (order, sign) -> (n_slopes, n_knots, slope_at_origin, has_cutoff)
TEMPLATE_TABLE = {
    (1, "+"): (1, 0, True, False),
    (1, "-"): (0, 1, False, True),
    (2, "+"): (1, 1, False, False),
    (2, "-"): (1, 1, True, True),
    (3, "+"): (2, 1, True, False),
    (3, "-"): (1, 2, False, True),
    (4, "+"): (2, 2, False, False),
    (4, "-"): (2, 2, True, True),
    (5, "+"): (3, 2, True, False),
    (5, "-"): (2, 3, False, True),
}


def test_template_shapes_match_frozen_table():
    for (order, sign), expect in TEMPLATE_TABLE.items():
        assert _template_shape(order, Sign.coerce(sign)) == expect
        # parameter count always equals the order
        ns, nk, _, _ = expect
        assert ns + nk == order
        assert SimpleClass(order, sign).param_count == order


def test_sign_coercion():
    assert Sign.coerce("+") is Sign.PLUS
    assert Sign.coerce(Sign.MINUS) is Sign.MINUS
    with pytest.raises(DomainError):
        Sign.coerce("plus")


def test_member_validation():
    with pytest.raises(DomainError):
        SimpleLogConcaveFn(0, "+", (), ())
    with pytest.raises(DomainError):
        SimpleLogConcaveFn(2, "+", (1.0, 2.0), (1.0,))  # too many slopes
    with pytest.raises(DomainError):
        SimpleLogConcaveFn(4, "+", (1.0, 1.0), (2.0, 1.0))  # knots decrease
    with pytest.raises(DomainError):
        SimpleLogConcaveFn(1, "+", (-1.0,), ())  # negative slope


def test_eval_fn_basic_shapes():
    exp_decay = SimpleLogConcaveFn(1, "+", (1.0,), ())
    assert eval_fn(exp_decay, 0.0) == 1.0
    assert eval_fn(exp_decay, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-15)
    assert eval_fn(exp_decay, -2.0) == eval_fn(exp_decay, 2.0)  # symmetric

    indicator = SimpleLogConcaveFn(1, "-", (), (1.5,))
    assert eval_fn(indicator, 1.0) == 1.0
    assert eval_fn(indicator, 1.5) == 1.0  # value at the cutoff is the left limit
    assert eval_fn(indicator, 1.5000001) == 0.0

    hinge = SimpleLogConcaveFn(2, "+", (2.0,), (1.0,))
    assert eval_fn(hinge, 0.7) == 1.0
    assert eval_fn(hinge, 3.0) == pytest.approx(math.exp(-4.0), rel=1e-15)

    assert eval_fn(CONSTANT_ONE, 1e9) == 1.0
    assert eval_fn(POINT_INDICATOR, 0.0) == 1.0
    assert eval_fn(POINT_INDICATOR, 1e-12) == 0.0
    with pytest.raises(DomainError):
        eval_fn(exp_decay, math.nan)


def test_eval_fn_potential_matches_simple():
    # same function written both ways: slope 1 from 0, slope 3 past 0.8, cut 2
    simple = SimpleLogConcaveFn(4, "-", (1.0, 2.0), (0.8, 2.0))
    pot = PotentialSpec(pieces=((1.0, 0.0), (3.0, 0.8)), cutoff=2.0)
    for t in (0.0, 0.3, 0.8, 1.7, 2.0, 2.1):
        assert eval_fn(pot, t) == pytest.approx(eval_fn(simple, t), rel=1e-14)
    assert fn_equal(simple, pot)


def test_eval_grid_matches_pointwise():
    rng = np.random.default_rng(5)
    for order in (1, 2, 3, 4, 5):
        for sign in ("+", "-"):
            f = random_member(rng, order, sign)
            ts = np.linspace(-3.0, 3.0, 301)
            grid = eval_grid(f, ts)
            for t, v in zip(ts, grid):
                assert v == pytest.approx(eval_fn(f, float(t)), abs=1e-15)


def test_segments_cover_support_and_agree_with_eval():
    rng = np.random.default_rng(17)
    for _ in range(20):
        f = random_potential(rng)
        segs = segments(f)
        assert segs[0].start == 0.0
        assert segs[-1].end == support_bound(f)
        for a, b in zip(segs, segs[1:]):
            assert a.end == b.start
        for seg in segs:
            if seg.end == INF:
                probe = seg.start + 1.0
            else:
                probe = 0.5 * (seg.start + seg.end)
            want = math.exp(-(seg.v0 + seg.lam * (probe - seg.start)))
            assert eval_fn(f, probe) == pytest.approx(want, rel=1e-14)


def test_support_bound():
    assert support_bound(CONSTANT_ONE) == INF
    assert support_bound(POINT_INDICATOR) == 0.0
    assert support_bound(SimpleLogConcaveFn(1, "-", (), (2.5,))) == 2.5
    assert support_bound(SimpleLogConcaveFn(3, "+", (1.0, 2.0), (1.0,))) == INF
    # an infinite slope acts as a cutoff at its knot
    assert support_bound(SimpleLogConcaveFn(2, "+", (INF,), (1.25,))) == 1.25


def test_canonicalize_boundary_members():
    assert canonicalize(SimpleLogConcaveFn(1, "+", (0.0,), ())) == CONSTANT_ONE
    assert canonicalize(SimpleLogConcaveFn(1, "-", (), (0.0,))) == POINT_INDICATOR
    assert canonicalize(SimpleLogConcaveFn(3, "+", (0.0, 0.0), (1.0,))) == CONSTANT_ONE
    # zero-size interior jump drops out
    f = SimpleLogConcaveFn(3, "+", (1.0, 0.0), (2.0,))
    assert canonicalize(f) == SimpleLogConcaveFn(1, "+", (1.0,), ())


def test_canonical_order_counts_degrees_of_freedom():
    rng = np.random.default_rng(23)
    for order in (1, 2, 3, 4, 5):
        for sign in ("+", "-"):
            f = random_member(rng, order, sign)
            g = canonicalize(f)
            assert g.order == order
            assert g.sign is Sign.coerce(sign)
            assert fn_equal(f, g)


def test_embed_round_trip():
    rng = np.random.default_rng(31)
    for order in (1, 2, 3, 4):
        for sign in ("+", "-"):
            f = random_member(rng, order, sign)
            for target in (order + 1, order + 2, order + 4):
                for tsign in ("+", "-"):
                    try:
                        g = embed(f, target, tsign)
                    except NotEmbeddable:
                        continue
                    assert g.order == target
                    assert fn_equal(f, g)
                    assert canonicalize(g) == canonicalize(f)


def test_embed_capacity_errors():
    big = SimpleLogConcaveFn(4, "+", (1.0, 2.0), (0.5, 1.5))
    with pytest.raises(NotEmbeddable):
        embed(big, 2, "+")
    exp_decay = SimpleLogConcaveFn(1, "+", (1.0,), ())
    with pytest.raises(NotEmbeddable):
        embed(exp_decay, 1, "-")  # order-1 minus holds only indicators
    with pytest.raises(DomainError):
        embed(exp_decay, 0, "+")


def test_fn_equal_tolerances():
    f = SimpleLogConcaveFn(2, "+", (1.0,), (1.0,))
    g = SimpleLogConcaveFn(2, "+", (1.0 + 1e-9,), (1.0,))
    assert not fn_equal(f, g)
    assert fn_equal(f, g, rel_tol=1e-8)
    assert fn_equal(f, g, abs_tol=1e-8)
    h = SimpleLogConcaveFn(1, "+", (1.0,), ())
    assert not fn_equal(f, h)
    assert fn_equal(h, SimpleLogConcaveFn(3, "+", (1.0, 0.0), (2.0,)))


def test_jump_form_merges_coincident_knots():
    f = SimpleLogConcaveFn(4, "+", (1.0, 2.0), (1.0, 1.0))
    jumps, cutoff = jump_form(f)
    assert cutoff == INF
    assert jumps == ((1.0, 3.0),)


def test_json_round_trip():
    rng = np.random.default_rng(41)
    for order in (1, 2, 3, 4, 5):
        for sign in ("+", "-"):
            f = random_member(rng, order, sign)
            d = fn_to_json(f)
            assert d["order"] == order and d["sign"] == sign
            assert fn_from_json(d) == f
            assert any_fn_from_json(d) == f
    # infinities serialize as the string "inf"
    f = SimpleLogConcaveFn(2, "+", (INF,), (1.0,))
    d = fn_to_json(f)
    assert d["slopes"] == ["inf"]
    assert fn_from_json(d) == f


def test_potential_json_round_trip():
    rng = np.random.default_rng(43)
    for _ in range(10):
        f = random_potential(rng)
        d = potential_to_json(f)
        assert potential_from_json(d) == f
        assert any_fn_from_json(d) == f
    with pytest.raises(DomainError):
        any_fn_from_json({"weird": 1})


def test_potential_validation():
    with pytest.raises(DomainError):
        PotentialSpec(pieces=((1.0, 0.5),))  # first piece must start at 0
    with pytest.raises(DomainError):
        PotentialSpec(pieces=((2.0, 0.0), (1.0, 1.0)))  # slopes decrease
    with pytest.raises(DomainError):
        PotentialSpec(pieces=((1.0, 0.0), (2.0, 0.0)))  # repeated knot
    with pytest.raises(DomainError):
        PotentialSpec(pieces=((1.0, 0.0),), cutoff=0.0)
    with pytest.raises(DomainError):
        PotentialSpec(pieces=((1.0, 0.0), (2.0, 3.0)), cutoff=2.0)


def test_distance_is_a_metric_on_samples():
    rng = np.random.default_rng(47)
    fns = [random_member(rng, order, s) for order in (1, 2, 3) for s in ("+", "-")]
    for f in fns:
        assert distance(f, f, 0.0, 2.0) == 0.0
    for f in fns:
        for g in fns:
            dfg = distance(f, g, 0.0, 2.0)
            assert dfg >= 0.0
            assert dfg == pytest.approx(distance(g, f, 0.0, 2.0), rel=1e-12)
    # triangle inequality on a few triples
    for i in range(len(fns) - 2):
        f, g, h = fns[i], fns[i + 1], fns[i + 2]
        lhs = distance(f, h, 0.0, 2.0)
        rhs = distance(f, g, 0.0, 2.0) + distance(g, h, 0.0, 2.0)
        assert lhs <= rhs * (1.0 + 1e-12)


def test_distance_detects_distinct_functions():
    f = SimpleLogConcaveFn(1, "+", (1.0,), ())
    g = SimpleLogConcaveFn(1, "+", (1.1,), ())
    assert distance(f, g, 0.0, 2.0) > 1e-3
    assert distance(f, embed(f, 5, "+"), 0.0, 4.0) == pytest.approx(0.0, abs=1e-15)


def test_distance_closed_form_check():
    # |e^-t - 1_[0,1]| integrated dt: on [0,1] it's 1 - (1 - 1/e) = 1/e,
    # beyond it's 1/e, total 2/e
    f = SimpleLogConcaveFn(1, "+", (1.0,), ())
    g = SimpleLogConcaveFn(1, "-", (), (1.0,))
    got = distance(f, g, 0.0, 0.0)
    assert got == pytest.approx(2.0 * 2.0 / math.e, rel=1e-12)  # weight doubles


@seed(13)
@settings(max_examples=80, deadline=None)
@given(
    st.integers(min_value=1, max_value=5),
    st.sampled_from(["+", "-"]),
    st.integers(min_value=0, max_value=2**31 - 1),
    st.floats(min_value=0.0, max_value=2.5),
    st.floats(min_value=0.0, max_value=2.5),
)
def test_midpoint_log_concavity(order, sign, entropy, t1, t2):
    f = random_member(np.random.default_rng(entropy), order, sign)
    mid = eval_fn(f, 0.5 * (t1 + t2))
    ends = math.sqrt(eval_fn(f, t1) * eval_fn(f, t2))
    assert mid >= ends * (1.0 - 1e-12)
