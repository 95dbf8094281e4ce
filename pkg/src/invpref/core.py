"""Universes, partial transforms, monoid generation and order pairs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional

Pair = tuple[int, int]

UNDEFINED = -1


class InvalidId(ValueError):
    """A relation or transform references an alternative outside the universe."""


@dataclass(frozen=True)
class Universe:
    """Finite indexed set of alternatives with symbolic labels."""

    alternatives: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        labels = tuple(self.alternatives)
        if not labels:
            raise ValueError("a universe needs at least one alternative")
        for label in labels:
            if not isinstance(label, str) or not label:
                raise ValueError(f"invalid label {label!r}")
        index = {label: i for i, label in enumerate(labels)}
        if len(index) != len(labels):
            raise ValueError("alternative labels must be unique")
        object.__setattr__(self, "alternatives", labels)
        object.__setattr__(self, "index", index)

    def __len__(self) -> int:
        return len(self.alternatives)

    @property
    def n(self) -> int:
        return len(self.alternatives)

    def id(self, label: str) -> int:
        return self.index[label]

    def label(self, i: int) -> str:
        return self.alternatives[i]

    def pair_label(self, pair: Pair) -> tuple[str, str]:
        return self.alternatives[pair[0]], self.alternatives[pair[1]]


@dataclass(frozen=True)
class PartialTransform:
    """A partial map on alternative ids, stored as a table with -1 where undefined.

    Equality and hashing use the table only, so two transforms with the same
    domain and pointwise map are the same element regardless of name.
    """

    name: str = field(compare=False)
    table: tuple[int, ...]

    @classmethod
    def from_map(cls, name: str, mapping: dict[int, int], n: int) -> PartialTransform:
        table = [UNDEFINED] * n
        for x, y in mapping.items():
            if not (0 <= x < n and 0 <= y < n):
                raise InvalidId(f"transform {name!r} maps {x} -> {y} outside 0..{n - 1}")
            table[x] = y
        return cls(name, tuple(table))

    @classmethod
    def identity(cls, n: int) -> PartialTransform:
        return cls("id", tuple(range(n)))

    def __call__(self, x: int) -> Optional[int]:
        y = self.table[x]
        return None if y == UNDEFINED else y

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(x for x, y in enumerate(self.table) if y != UNDEFINED)

    @property
    def map(self) -> dict[int, int]:
        return {x: y for x, y in enumerate(self.table) if y != UNDEFINED}

    def defined(self, x: int) -> bool:
        return self.table[x] != UNDEFINED

    @property
    def is_empty(self) -> bool:
        return all(y == UNDEFINED for y in self.table)

    @property
    def is_total(self) -> bool:
        return all(y != UNDEFINED for y in self.table)

    @property
    def is_identity(self) -> bool:
        return all(y == x for x, y in enumerate(self.table))


def compose(outer: PartialTransform, inner: PartialTransform, universe: Optional[Universe] = None) -> PartialTransform:
    """Return outer∘inner, defined on {x in D_inner : inner(x) in D_outer}."""
    if len(outer.table) != len(inner.table):
        raise ValueError("transforms are defined over different universes")
    if universe is not None and len(universe) != len(inner.table):
        raise ValueError("transform size does not match universe")
    out = outer.table
    table = tuple(UNDEFINED if y == UNDEFINED else out[y] for y in inner.table)
    if inner.is_identity:
        name = outer.name
    elif outer.is_identity:
        name = inner.name
    else:
        name = f"{outer.name}∘{inner.name}"
    return PartialTransform(name, table)


@dataclass(frozen=True)
class Monoid:
    """Composition closure of a set of generators, identity first.

    ``closed`` is False when generation stopped at ``cap`` before reaching a
    fixpoint; every element is still a genuine composition of generators.
    """

    elements: tuple[PartialTransform, ...]
    generators: tuple[PartialTransform, ...]
    closed: bool
    cap: int

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[PartialTransform]:
        return iter(self.elements)

    def __getitem__(self, k: int) -> PartialTransform:
        return self.elements[k]

    @property
    def size(self) -> int:
        return len(self.elements[0].table)

    def active(self) -> list[tuple[int, PartialTransform]]:
        """Elements with non-empty domain, with their indices."""
        return [(k, w) for k, w in enumerate(self.elements) if not w.is_empty]

    @property
    def all_total(self) -> bool:
        return all(w.is_total for w in self.elements)

    def index_of(self, name: str) -> int:
        for k, w in enumerate(self.elements):
            if w.name == name:
                return k
        raise KeyError(name)


DEFAULT_MONOID_CAP = 10_000


def generate_monoid(
    generators: Iterable[PartialTransform], universe: Universe, cap: int = DEFAULT_MONOID_CAP
) -> Monoid:
    """Breadth-first closure of ``generators`` under composition."""
    if cap < 1:
        raise ValueError("cap must be positive")
    n = len(universe)
    gens = tuple(generators)
    for g in gens:
        if len(g.table) != n:
            raise ValueError(f"transform {g.name!r} has the wrong size")
        if any(y != UNDEFINED and not 0 <= y < n for y in g.table):
            raise InvalidId(f"transform {g.name!r} maps outside the universe")
    identity = PartialTransform.identity(n)
    elements: list[PartialTransform] = [identity]
    seen = {identity.table}
    queue: deque[PartialTransform] = deque()
    closed = True
    for g in gens:
        if g.table in seen:
            continue
        if len(elements) >= cap:
            closed = False
            break
        seen.add(g.table)
        elements.append(g)
        queue.append(g)
    unique_gens = [g for g in elements[1:]]
    while closed and queue:
        w = queue.popleft()
        for g in unique_gens:
            c = compose(g, w)
            if c.table in seen:
                continue
            if len(elements) >= cap:
                closed = False
                break
            seen.add(c.table)
            elements.append(c)
            queue.append(c)
    return Monoid(tuple(elements), gens, closed, cap)


@dataclass(frozen=True)
class OrderPair:
    """A weak relation W and a strict relation S, with S ⊆ W for valid pairs."""

    weak: frozenset[Pair] = frozenset()
    strict: frozenset[Pair] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "weak", frozenset(self.weak))
        object.__setattr__(self, "strict", frozenset(self.strict))

    def is_order_pair(self) -> bool:
        return self.strict <= self.weak

    def is_reflexive(self, n: int) -> bool:
        return all((x, x) in self.weak for x in range(n))

    @property
    def is_empty(self) -> bool:
        return not self.weak and not self.strict

    def __le__(self, other: OrderPair) -> bool:
        return self.weak <= other.weak and self.strict <= other.strict

    def ids(self) -> set[int]:
        return {x for p in self.weak | self.strict for x in p}

    def format(self, universe: Universe) -> str:
        def rel(pairs: frozenset[Pair]) -> str:
            return "{" + ", ".join(f"({universe.label(a)},{universe.label(b)})" for a, b in sorted(pairs)) + "}"

        return f"⟨{rel(self.weak)}, {rel(self.strict)}⟩"


@dataclass(frozen=True)
class NormalizationReport:
    added_reflexive: int
    added_strict_to_weak: tuple[Pair, ...]

    @property
    def repaired(self) -> bool:
        return bool(self.added_reflexive or self.added_strict_to_weak)


def normalize_data(raw: OrderPair, universe: Universe) -> tuple[OrderPair, NormalizationReport]:
    """Make the weak part reflexive and restore strict ⊆ weak."""
    n = len(universe)
    for a, b in raw.weak | raw.strict:
        if not (0 <= a < n and 0 <= b < n):
            raise InvalidId(f"pair ({a}, {b}) outside 0..{n - 1}")
    diagonal = {(x, x) for x in range(n)}
    missing_strict = tuple(sorted(raw.strict - raw.weak))
    added_reflexive = len(diagonal - raw.weak)
    weak = raw.weak | diagonal | raw.strict
    return OrderPair(weak, raw.strict), NormalizationReport(added_reflexive, missing_strict)


class Status(Enum):
    RATIONALIZABLE = "Rationalizable"
    NOT_RATIONALIZABLE = "NotRationalizable"
    UNKNOWN = "Unknown"

    @property
    def exit_code(self) -> int:
        return {Status.RATIONALIZABLE: 0, Status.NOT_RATIONALIZABLE: 1, Status.UNKNOWN: 2}[self]


@dataclass(frozen=True)
class Preference:
    """A complete preorder given by its weak part; strict is the asymmetric part."""

    weak: frozenset[Pair]
    n: int

    @property
    def strict(self) -> frozenset[Pair]:
        return frozenset((x, y) for x, y in self.weak if (y, x) not in self.weak)

    def ranks(self, x: int, y: int) -> bool:
        return (x, y) in self.weak

    def prefers(self, x: int, y: int) -> bool:
        return (x, y) in self.weak and (y, x) not in self.weak


def preference_violations(pref: Preference, data: OrderPair, monoid: Monoid) -> list[str]:
    """Problems that stop ``pref`` from being an invariant rationalization of ``data``."""
    n = pref.n
    weak = pref.weak
    problems: list[str] = []
    for x in range(n):
        for y in range(n):
            if (x, y) not in weak and (y, x) not in weak:
                problems.append(f"incomplete at ({x},{y})")
                return problems
    succ: list[set[int]] = [set() for _ in range(n)]
    for x, y in weak:
        succ[x].add(y)
    for x in range(n):
        for y in succ[x]:
            if not succ[y] <= succ[x]:
                problems.append(f"intransitive through ({x},{y})")
                return problems
    strict = pref.strict
    if not data.weak <= weak:
        problems.append("does not extend the weak data")
    if not data.strict <= strict:
        problems.append("does not extend the strict data")
    for w in monoid.elements:
        t = w.table
        dom = [x for x in range(n) if t[x] != UNDEFINED]
        for x in dom:
            for y in dom:
                if ((x, y) in weak) != ((t[x], t[y]) in weak):
                    problems.append(f"not invariant under {w.name} at ({x},{y})")
                    return problems
    return problems


def is_rationalization(pref: Preference, data: OrderPair, monoid: Monoid) -> bool:
    return not preference_violations(pref, data, monoid)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision procedure with whatever certificate it produced."""

    status: Status
    engine: str
    cycle: object = None
    derivation: object = None
    preference: Optional[Preference] = None
    reason: str = ""

    @property
    def exit_code(self) -> int:
        return self.status.exit_code
