import pytest
from hypothesis import assume, given, settings

from invpref import examples
from invpref.closure import find_cycle, transitive_closure
from invpref.core import OrderPair, Universe, generate_monoid
from invpref.predictions import NotRationalizable, forced_by_sat, forced_comparisons, scan_singletons
from invpref.refutation import ForbiddenSubrelation, Limits

from oracles import rationalizations
from strategies import order_pairs, small_instances


def U(n):
    return Universe(tuple(f"x{i}" for i in range(n)))


def test_dated_rewards_strict_prediction():
    inst = examples.dated_rewards()
    u, m = inst.universe, inst.monoid()
    pred = forced_comparisons(inst.data, m)
    a0, b0 = u.id("(a,0)"), u.id("(b,0)")
    assert (a0, b0) in pred.strict
    assert pred.source[(a0, b0, "strict")] == "collapse"
    assert (a0, b0) in forced_by_sat(inst.data, m).strict


def test_refutable_data_raise():
    inst = examples.stationarity()
    with pytest.raises(NotRationalizable):
        forced_comparisons(inst.data, inst.monoid())
    with pytest.raises(NotRationalizable):
        forced_by_sat(inst.data, inst.monoid())


def test_scan_reads_singletons_only():
    clauses = [
        ForbiddenSubrelation(OrderPair(frozenset({(1, 0)}), frozenset({(1, 0)}))),
        ForbiddenSubrelation(OrderPair(frozenset({(2, 0)}), frozenset())),
        ForbiddenSubrelation(OrderPair(frozenset({(2, 1), (0, 1)}), frozenset())),
    ]
    weak, strict = scan_singletons(clauses)
    assert weak == {(0, 1), (0, 2)}
    assert strict == {(0, 2)}


@settings(max_examples=60, deadline=None)
@given(order_pairs(5))
def test_identity_predictions_are_the_transitive_closure(data):
    n = 5
    m = generate_monoid([], U(n))
    assume(find_cycle(data, n) is None)
    pred = forced_comparisons(data, m)
    closed = transitive_closure(data, n)
    off = {p for p in closed.weak if p[0] != p[1]}
    assert pred.weak == off
    assert pred.strict == {p for p in closed.strict if p[0] != p[1]}


@settings(max_examples=80, deadline=None)
@given(small_instances(max_n=4, max_gens=2, max_monoid=8))
def test_predictions_equal_rationalization_intersection(case):
    data, monoid, _ = case
    assume(monoid.closed)
    rats = rationalizations(data, monoid)
    assume(rats)
    n = monoid.size
    pred = forced_comparisons(data, monoid, Limits(max_links=8))
    weak = {(x, y) for x in range(n) for y in range(n) if x != y and all(r[x] <= r[y] for r in rats)}
    strict = {(x, y) for x in range(n) for y in range(n) if x != y and all(r[x] < r[y] for r in rats)}
    assert pred.weak == weak and pred.strict == strict
    # observed comparisons are forced, strict ⊆ weak, and the forced pair is acyclic
    assert {p for p in data.weak if p[0] != p[1]} <= pred.weak
    assert {p for p in data.strict if p[0] != p[1]} <= pred.strict
    assert pred.strict <= pred.weak
    assert find_cycle(pred.pair, n) is None
    assert set(pred.source) == {(x, y, "weak") for x, y in weak} | {(x, y, "strict") for x, y in strict}


def test_sat_fallback_when_saturation_is_cut_short():
    inst = examples.dated_rewards()
    m = inst.monoid()
    pred = forced_comparisons(inst.data, m, Limits(max_clauses=5))
    full = forced_comparisons(inst.data, m)
    assert pred.pair == full.pair
    assert "sat" in pred.source.values()
