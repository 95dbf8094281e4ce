"""Comparisons shared by every invariant rationalization."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import sat_oracle
from .core import Monoid, OrderPair, Pair, Status
from .refutation import Limits, saturate


class NotRationalizable(Exception):
    """Forced comparisons are only defined when some rationalization exists."""


@dataclass(frozen=True)
class Predictions:
    """Forced comparisons: (x,y) in ``weak`` means every rationalization ranks x ≽ y.

    ``source`` maps (x, y, "weak"|"strict") to "collapse" or "sat".
    """

    pair: OrderPair
    source: dict[tuple[int, int, str], str] = field(default_factory=dict)

    @property
    def weak(self) -> frozenset[Pair]:
        return self.pair.weak

    @property
    def strict(self) -> frozenset[Pair]:
        return self.pair.strict


def scan_singletons(clauses) -> tuple[set[Pair], set[Pair]]:
    """Read forced comparisons off singleton forbidden subrelations."""
    weak: set[Pair] = set()
    strict: set[Pair] = set()
    for c in clauses:
        if len(c.pair.weak) != 1:
            continue
        ((a, b),) = c.pair.weak
        if a == b:
            continue
        weak.add((b, a))
        if not c.pair.strict:
            strict.add((b, a))
    return weak, strict


def forced_comparisons(data: OrderPair, monoid: Monoid, limits: Optional[Limits] = None) -> Predictions:
    """Scan the saturated clause set; fall back to SAT queries when saturation was cut short."""
    res = saturate(data, monoid, limits or Limits())
    if res.refuted:
        raise NotRationalizable("the data admit no invariant rationalization")
    weak, strict = scan_singletons(res.clauses)
    source = {(x, y, "weak"): "collapse" for x, y in weak}
    source.update({(x, y, "strict"): "collapse" for x, y in strict})
    if not res.complete:
        cnf = sat_oracle.encode_phi(data, monoid)
        if not sat_oracle.solve(cnf).sat:
            raise NotRationalizable("the data admit no invariant rationalization")
        n = monoid.size
        for x in range(n):
            for y in range(n):
                if x == y:
                    continue
                if (x, y) not in weak and sat_oracle.forced(data, monoid, (x, y), False, cnf):
                    weak.add((x, y))
                    source[(x, y, "weak")] = "sat"
                if (x, y) in weak and (x, y) not in strict and sat_oracle.forced(data, monoid, (x, y), True, cnf):
                    strict.add((x, y))
                    source[(x, y, "strict")] = "sat"
    return Predictions(OrderPair(frozenset(weak), frozenset(strict)), source)


def forced_by_sat(data: OrderPair, monoid: Monoid) -> Predictions:
    """The same sets computed only with SAT queries."""
    cnf = sat_oracle.encode_phi(data, monoid)
    if sat_oracle.decide(data, monoid).status != Status.RATIONALIZABLE:
        raise NotRationalizable("the data admit no invariant rationalization")
    n = monoid.size
    weak, strict = set(), set()
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            if sat_oracle.forced(data, monoid, (x, y), False, cnf):
                weak.add((x, y))
                if sat_oracle.forced(data, monoid, (x, y), True, cnf):
                    strict.add((x, y))
    source = {(x, y, "weak"): "sat" for x, y in weak}
    source.update({(x, y, "strict"): "sat" for x, y in strict})
    return Predictions(OrderPair(frozenset(weak), frozenset(strict)), source)
