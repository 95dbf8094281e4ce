"""Hypothesis strategies for order pairs, transforms and instances."""

from __future__ import annotations

from hypothesis import strategies as st

from invpref.core import OrderPair, PartialTransform, Universe, generate_monoid, normalize_data


def universes(min_n: int = 1, max_n: int = 6):
    return st.integers(min_n, max_n).map(lambda n: Universe(tuple(f"x{i}" for i in range(n))))


@st.composite
def order_pairs(draw, n: int, normalized: bool = True):
    cells = [(x, y) for x in range(n) for y in range(n)]
    weak = draw(st.frozensets(st.sampled_from(cells), max_size=len(cells))) if cells else frozenset()
    strict = draw(st.frozensets(st.sampled_from(sorted(weak)))) if weak else frozenset()
    strict = frozenset(p for p in strict if p[0] != p[1] or draw(st.booleans()))
    pair = OrderPair(weak, strict)
    if normalized:
        pair, _ = normalize_data(pair, Universe(tuple(f"x{i}" for i in range(n))))
    return pair


@st.composite
def transforms(draw, n: int, name: str = "g", total: bool = False):
    if total:
        table = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    else:
        table = draw(st.lists(st.integers(-1, n - 1), min_size=n, max_size=n))
    return PartialTransform(name, tuple(table))


@st.composite
def small_instances(draw, max_n: int = 4, max_gens: int = 2, max_monoid: int = 10):
    """(data, monoid) with a closed monoid of bounded size."""
    n = draw(st.integers(1, max_n))
    universe = Universe(tuple(f"x{i}" for i in range(n)))
    k = draw(st.integers(0, max_gens))
    gens = [draw(transforms(n, f"g{i}")) for i in range(k)]
    monoid = generate_monoid(gens, universe, max_monoid + 1)
    data = draw(order_pairs(n))
    return data, monoid, universe
