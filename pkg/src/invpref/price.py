"""Price–consumption data: revealed comparisons and negative-cycle tests.

All arithmetic is exact over fractions. A cycle whose sum is exactly zero, or
whose product is exactly one, passes.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import OrderPair, Universe

Vector = tuple[Fraction, ...]


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PriceDataset:
    prices: tuple[Vector, ...]
    quantities: tuple[Vector, ...]

    def __post_init__(self) -> None:
        prices = tuple(tuple(Fraction(c) for c in p) for p in self.prices)
        quantities = tuple(tuple(Fraction(c) for c in x) for x in self.quantities)
        if len(prices) != len(quantities):
            raise DimensionMismatch("need one bundle per price vector")
        dims = {len(v) for v in prices + quantities}
        if len(dims) > 1:
            raise DimensionMismatch(f"vectors of differing dimension {sorted(dims)}")
        if dims and min(dims) < 1:
            raise DimensionMismatch("dimension must be at least 1")
        if any(c <= 0 for p in prices for c in p):
            raise ValueError("prices must be strictly positive")
        if any(c < 0 for x in quantities for c in x):
            raise ValueError("quantities must be non-negative")
        object.__setattr__(self, "prices", prices)
        object.__setattr__(self, "quantities", quantities)

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[Sequence, Sequence]]) -> PriceDataset:
        rows = list(rows)
        return cls(tuple(tuple(p) for p, _ in rows), tuple(tuple(x) for _, x in rows))

    def __len__(self) -> int:
        return len(self.prices)

    @property
    def dimension(self) -> int:
        return len(self.prices[0]) if self.prices else 0

    def permuted(self, order: Sequence[int]) -> PriceDataset:
        return PriceDataset(tuple(self.prices[i] for i in order), tuple(self.quantities[i] for i in order))


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def read_csv(text: str) -> PriceDataset:
    """Header row, then per observation L price columns followed by L quantity columns."""
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if len(rows) < 1:
        raise ValueError("missing header row")
    header, body = rows[0], rows[1:]
    width = len(header)
    if width == 0 or width % 2:
        raise DimensionMismatch("header must have 2·L columns")
    L = width // 2
    prices, quantities = [], []
    for i, row in enumerate(body, start=2):
        if len(row) != width:
            raise DimensionMismatch(f"line {i}: expected {width} columns, got {len(row)}")
        try:
            vals = [Fraction(c.strip()) for c in row]
        except ValueError:
            raise ValueError(f"line {i}: non-numeric entry") from None
        prices.append(tuple(vals[:L]))
        quantities.append(tuple(vals[L:]))
    return PriceDataset(tuple(prices), tuple(quantities))


def revealed_pair(ds: PriceDataset) -> tuple[OrderPair, Universe]:
    """x ≿ y when x is chosen at prices p and p·x ≥ p·y; strict when p·x > p·y."""
    bundles: list[Vector] = []
    index: dict[Vector, int] = {}
    for x in ds.quantities:
        if x not in index:
            index[x] = len(bundles)
            bundles.append(x)
    weak, strict = set(), set()
    for p, x in zip(ds.prices, ds.quantities):
        i = index[x]
        spent = dot(p, x)
        for j, y in enumerate(bundles):
            cost = dot(p, y)
            if spent >= cost:
                weak.add((i, j))
            if spent > cost:
                strict.add((i, j))
    weak |= {(i, i) for i in range(len(bundles))}
    labels = tuple("(" + ",".join(str(c) for c in b) + ")" for b in bundles)
    return OrderPair(frozenset(weak), frozenset(strict)), Universe(labels)


@dataclass(frozen=True)
class PriceResult:
    passed: bool
    cycle: Optional[tuple[int, ...]] = None
    value: Optional[Fraction] = None  # cycle sum, or cycle product for the homothetic test

    def __bool__(self) -> bool:
        return self.passed


def negative_cycle(weights: list[list[Fraction]]) -> Optional[list[int]]:
    """Bellman–Ford from a virtual source; returns a negative cycle of indices if one exists."""
    k = len(weights)
    dist = [Fraction(0)] * k
    pred = [-1] * k
    last = -1
    for _ in range(k):
        last = -1
        for i in range(k):
            for j in range(k):
                if i != j and dist[i] + weights[i][j] < dist[j]:
                    dist[j] = dist[i] + weights[i][j]
                    pred[j] = i
                    last = j
        if last == -1:
            return None
    v = last
    for _ in range(k):
        v = pred[v]
    cycle = [v]
    u = pred[v]
    while u != v:
        cycle.append(u)
        u = pred[u]
    cycle.reverse()
    return cycle


def cycle_sum(weights: list[list[Fraction]], cycle: Sequence[int]) -> Fraction:
    m = len(cycle)
    return sum((weights[cycle[i]][cycle[(i + 1) % m]] for i in range(m)), Fraction(0))


def quasilinear_weights(ds: PriceDataset) -> list[list[Fraction]]:
    """w(i→j) = p̃_i·(y_j − y_i), with the last good as numeraire priced at 1."""
    tilde = [tuple(c / p[-1] for c in p[:-1]) for p in ds.prices]
    ys = [x[:-1] for x in ds.quantities]
    k = len(ds)
    return [[dot(tilde[i], [a - b for a, b in zip(ys[j], ys[i])]) for j in range(k)] for i in range(k)]


def translation_weights(ds: PriceDataset) -> list[list[Fraction]]:
    """w(i→j) = (p_i/‖p_i‖₁)·(x_j − x_i)."""
    normed = [tuple(c / sum(p) for c in p) for p in ds.prices]
    xs = ds.quantities
    k = len(ds)
    return [[dot(normed[i], [a - b for a, b in zip(xs[j], xs[i])]) for j in range(k)] for i in range(k)]


def _sum_check(weights: list[list[Fraction]]) -> PriceResult:
    cycle = negative_cycle(weights)
    if cycle is None:
        return PriceResult(True)
    total = cycle_sum(weights, cycle)
    if total >= 0:
        raise AssertionError("Bellman–Ford reported a cycle that is not negative")
    return PriceResult(False, tuple(cycle), total)


def quasilinear_check(ds: PriceDataset) -> PriceResult:
    return _sum_check(quasilinear_weights(ds))


def translation_check(ds: PriceDataset) -> PriceResult:
    return _sum_check(translation_weights(ds))


def homothetic_factors(ds: PriceDataset) -> list[list[Fraction]]:
    """f(i→j) = p_i·x_j after scaling each p_i so that p_i·x_i = 1."""
    factors = []
    for p, x in zip(ds.prices, ds.quantities):
        spent = dot(p, x)
        if spent <= 0:
            raise ValueError("homothetic test needs p_k·x_k > 0 for every observation")
        factors.append([dot(p, y) / spent for y in ds.quantities])
    return factors


def cycle_product(factors: list[list[Fraction]], cycle: Sequence[int]) -> Fraction:
    m = len(cycle)
    out = Fraction(1)
    for i in range(m):
        out *= factors[cycle[i]][cycle[(i + 1) % m]]
    return out


def homothetic_check(ds: PriceDataset) -> PriceResult:
    """Fail iff some cycle has ∏ p_i·x_next < 1, found by multiplicative Bellman–Ford."""
    f = homothetic_factors(ds)
    k = len(f)
    for i in range(k):
        for j in range(k):
            if i != j and f[i][j] == 0:
                return PriceResult(False, (i, j), Fraction(0))
    best = [Fraction(1)] * k
    pred = [-1] * k
    last = -1
    for _ in range(k):
        last = -1
        for i in range(k):
            for j in range(k):
                if i != j and best[i] * f[i][j] < best[j]:
                    best[j] = best[i] * f[i][j]
                    pred[j] = i
                    last = j
        if last == -1:
            return PriceResult(True)
    v = last
    for _ in range(k):
        v = pred[v]
    cycle = [v]
    u = pred[v]
    while u != v:
        cycle.append(u)
        u = pred[u]
    cycle.reverse()
    prod = cycle_product(f, cycle)
    if prod >= 1:
        raise AssertionError("Bellman–Ford reported a cycle whose product is not below one")
    return PriceResult(False, tuple(cycle), prod)


def garp_check(ds: PriceDataset):
    """A cycle among the revealed comparisons with at least one strict link, if any."""
    from .closure import find_cycle

    pair, universe = revealed_pair(ds)
    return find_cycle(pair, len(universe)), universe
