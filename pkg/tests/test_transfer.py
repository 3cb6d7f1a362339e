from fractions import Fraction

import pytest

from linecat.drcat import hom_compose, hom_d, homotopy_h
from linecat.products import (BasisMorphism, VElement, delta, mk_closed,
                              theta, trans, unit)
from linecat.scalars import ExpScalar
from linecat.stepforms import StepElement, sf_mul
from linecat.transfer import (enumerate_trees, ijk_sign, iota, pi_velement,
                              transfer_functor, transfer_product)

th, dl = StepElement.theta, StepElement.delta


def test_tree_counts_catalan_and_schroeder():
    assert [len(enumerate_trees(n, 2)) for n in range(2, 7)] == [1, 2, 5, 14, 42]
    assert [len(enumerate_trees(n)) for n in range(2, 6)] == [1, 3, 11, 45]
    with pytest.raises(ValueError):
        enumerate_trees(1)


def test_tree_order_deterministic():
    once = [str(t) for t in enumerate_trees(4, 2)]
    again = [str(t) for t in enumerate_trees(4, 2)]
    assert once == again
    assert len(set(once)) == len(once)


def test_m2_matches_closed(cfg3):
    for ws in ([trans("a", "b"), trans("b", "c")],
               [trans("a", "b"), trans("b", "a")],
               [theta(cfg3, "a", "b", 2), trans("a", "b")]):
        assert transfer_product(cfg3, ws) == mk_closed(cfg3, ws)


def test_unbounded_arity_equals_binary(cfg3, cfg4):
    tuples = [
        [trans("a", "b"), trans("b", "c"), trans("c", "a")],
        [trans("a", "b"), theta(cfg3, "b", "a", 1), trans("b", "a")],
        [delta(cfg3, "a", "b"), trans("a", "b"), trans("b", "a")],
    ]
    for ws in tuples:
        assert transfer_product(cfg3, ws, use_binary_only=True) == \
            transfer_product(cfg3, ws, use_binary_only=False)
    ws = [trans("a", "b"), trans("b", "c"), trans("c", "d"), trans("d", "a")]
    assert transfer_product(cfg4, ws, use_binary_only=True) == \
        transfer_product(cfg4, ws, use_binary_only=False)


def test_m1_transfer(cfg3):
    assert transfer_product(cfg3, [trans("a", "b")]).is_zero()
    assert transfer_product(cfg3, [theta(cfg3, "a", "b", 2)]) == \
        mk_closed(cfg3, [theta(cfg3, "a", "b", 2)])


def test_single_surviving_tree_shape(cfg4):
    """The quadrilateral 3-product receives exactly one tree contribution."""
    contribs = []
    out = transfer_product(cfg4, [trans("a", "b"), trans("b", "c"),
                                  trans("c", "d")], collect=contribs)
    assert len(contribs) == 1
    assert str(contribs[0].tree) == "((* *) *)"
    assert contribs[0].value == out
    assert not out.is_zero()


def test_two_tree_telescoping(cfg4):
    """Diagonal quadrilateral product: two trees, step parts telescope."""
    contribs = []
    out = transfer_product(cfg4, [trans("a", "b"), trans("b", "c"),
                                  trans("c", "d"), trans("d", "a")],
                           collect=contribs)
    assert len(contribs) == 2
    x_ab = cfg4.intersect("a", "b").x
    x_da = cfg4.intersect("d", "a").x
    area = ExpScalar.exp(Fraction(-7, 96))
    assert out == VElement.of_step("a", (th(x_ab) - th(x_da)).scale_s(area))
    # each piece individually carries an intermediate step boundary
    for c in contribs:
        assert not c.value.is_zero()


def test_functor_components(cfg3):
    # first component is the embedding
    assert transfer_functor(cfg3, [trans("a", "b")]) == \
        iota(cfg3, trans("a", "b"))
    # second component: minus the homotopy of the composition
    ws = [trans("a", "b"), trans("b", "c")]
    expect = homotopy_h(cfg3, hom_compose(
        cfg3, iota(cfg3, ws[0]), iota(cfg3, ws[1]))).scale_s(ExpScalar.of(-1))
    g2 = transfer_functor(cfg3, ws, suspended=True)
    # the left factor has degree zero, so the shifted product adds one sign
    assert g2 == expect.scale_s(ExpScalar.of(-1))
    # a degree-zero composition is annihilated by the root homotopy
    assert transfer_functor(
        cfg3, [theta(cfg3, "a", "b", 1), trans("a", "b")]).is_zero()


def test_transfer_respects_retract_projection(cfg3):
    # P = Id on the image of iota composed with pi
    for gen in (trans("a", "b"), trans("b", "a")):
        el = iota(cfg3, gen)
        assert pi_velement(cfg3, el) == VElement.of_basis(gen)


def test_trace_sums_to_total(cfg4):
    ws = [trans("a", "b"), trans("b", "c"), trans("c", "d"), trans("d", "a")]
    contribs = []
    total = transfer_product(cfg4, ws, collect=contribs)
    acc = VElement.zero(ws[0].source, ws[-1].target)
    for c in contribs:
        acc = acc + c.value
    assert acc == total


def test_ijk_sign_on_triangle(cfg3):
    contribs = []
    transfer_product(cfg3, [trans("a", "b"), trans("b", "c")],
                     collect=contribs)
    [c] = contribs
    assert ijk_sign(c) == 1  # sigma^2 = +1
