"""Propositional encoding of invariant rationalizability and a DPLL solver.

Atoms are [x ≽ y] and [x ≻ y] for every ordered pair. The clause families are
completeness, coherence of the strict atoms, transitivity, the observations,
and the invariance biconditionals for every transform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional, Sequence

from .core import (
    UNDEFINED,
    Monoid,
    OrderPair,
    Pair,
    Preference,
    Status,
    Verdict,
    preference_violations,
)


MAX_ALTERNATIVES = 64


class VerificationFailure(RuntimeError):
    """A model decoded into something that is not an invariant rationalization."""


class TooLarge(ValueError):
    """The encoding would be too big for an in-memory DPLL run."""


@dataclass(frozen=True)
class VarTable:
    """Variables 1..2n²: [x≽y] is 2(xn+y)+1 and [x≻y] is 2(xn+y)+2."""

    n: int

    @property
    def count(self) -> int:
        return 2 * self.n * self.n

    def weak(self, x: int, y: int) -> int:
        return 2 * (x * self.n + y) + 1

    def strict(self, x: int, y: int) -> int:
        return 2 * (x * self.n + y) + 2

    def atom(self, var: int) -> tuple[int, int, bool]:
        q, r = divmod(var - 1, 2)
        x, y = divmod(q, self.n)
        return x, y, r == 1


@dataclass
class Cnf:
    num_vars: int
    clauses: list[tuple[int, ...]]
    metadata: dict = field(default_factory=dict)

    def with_units(self, *lits: int) -> Cnf:
        return Cnf(self.num_vars, self.clauses + [(l,) for l in lits], dict(self.metadata))


def _clean(clause: Iterable[int]) -> Optional[tuple[int, ...]]:
    lits = set(clause)
    if any(-l in lits for l in lits):
        return None
    return tuple(sorted(lits, key=lambda l: (abs(l), l)))


def encode_phi(data: OrderPair, monoid: Monoid, max_alternatives: int = MAX_ALTERNATIVES) -> Cnf:
    n = monoid.size
    if n > max_alternatives:
        raise TooLarge(f"{n} alternatives exceed the oracle's limit of {max_alternatives}")
    vt = VarTable(n)
    W, S = vt.weak, vt.strict
    seen: set[tuple[int, ...]] = set()
    clauses: list[tuple[int, ...]] = []

    def emit(*lits: int) -> None:
        c = _clean(lits)
        if c is not None and c not in seen:
            seen.add(c)
            clauses.append(c)

    pairs = list(product(range(n), repeat=2))
    for x, y in pairs:
        emit(W(x, y), W(y, x))
    for x, y in pairs:
        emit(-W(x, y), -S(y, x))
        emit(W(x, y), S(y, x))
    for x, y, z in product(range(n), repeat=3):
        emit(-W(x, y), -W(y, z), W(x, z))
    for x, y in sorted(data.weak):
        emit(W(x, y))
    for x, y in sorted(data.strict):
        emit(S(x, y))
    for w in monoid.elements:
        t = w.table
        dom = [x for x in range(n) if t[x] != UNDEFINED]
        for x in dom:
            for y in dom:
                u, v = t[x], t[y]
                emit(-W(x, y), W(u, v))
                emit(W(x, y), -W(u, v))
                emit(-S(x, y), S(u, v))
                emit(S(x, y), -S(u, v))
    meta = {"n": n, "transforms": len(monoid), "monoid_closed": monoid.closed}
    return Cnf(vt.count, clauses, meta)


@dataclass(frozen=True)
class SolveResult:
    sat: bool
    model: Optional[tuple[bool, ...]] = None  # model[v] for v in 1..num_vars; index 0 unused

    def __bool__(self) -> bool:
        return self.sat


def solve(cnf: Cnf) -> SolveResult:
    """DPLL with two watched literals and chronological backtracking.

    Branching picks the lowest unassigned variable and tries true first.
    """
    nv = cnf.num_vars
    value: list[int] = [0] * (nv + 1)  # 0 unassigned, 1 true, -1 false
    watches: dict[int, list[int]] = {}
    clauses: list[list[int]] = []
    trail: list[int] = []
    units: list[int] = []
    for c in cnf.clauses:
        if not c:
            return SolveResult(False)
        if len(c) == 1:
            units.append(c[0])
            continue
        k = len(clauses)
        clauses.append(list(c))
        watches.setdefault(c[0], []).append(k)
        watches.setdefault(c[1], []).append(k)

    def lit_value(l: int) -> int:
        v = value[abs(l)]
        return v if l > 0 else -v

    def assign(l: int) -> None:
        value[abs(l)] = 1 if l > 0 else -1
        trail.append(l)

    def propagate(head: int) -> tuple[bool, int]:
        while head < len(trail):
            false_lit = -trail[head]
            head += 1
            watching = watches.get(false_lit)
            if not watching:
                continue
            keep: list[int] = []
            conflict = False
            i = 0
            while i < len(watching):
                k = watching[i]
                i += 1
                c = clauses[k]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if lit_value(c[0]) == 1:
                    keep.append(k)
                    continue
                for j in range(2, len(c)):
                    if lit_value(c[j]) != -1:
                        c[1], c[j] = c[j], c[1]
                        watches.setdefault(c[1], []).append(k)
                        break
                else:
                    keep.append(k)
                    other = lit_value(c[0])
                    if other == -1:
                        conflict = True
                        keep.extend(watching[i:])
                        break
                    if other == 0:
                        assign(c[0])
            watches[false_lit] = keep
            if conflict:
                return False, head
        return True, head

    for l in units:
        cur = lit_value(l)
        if cur == -1:
            return SolveResult(False)
        if cur == 0:
            assign(l)
    ok, head = propagate(0)
    if not ok:
        return SolveResult(False)

    # each decision: (trail length before it, literal, flipped already)
    decisions: list[tuple[int, int, bool]] = []
    next_var = 1
    while True:
        while next_var <= nv and value[next_var] != 0:
            next_var += 1
        if next_var > nv:
            model = tuple([False] + [value[v] == 1 for v in range(1, nv + 1)])
            return SolveResult(True, model)
        decisions.append((len(trail), next_var, False))
        assign(next_var)
        ok, head = propagate(head)
        while not ok:
            while decisions and decisions[-1][2]:
                decisions.pop()
            if not decisions:
                return SolveResult(False)
            mark, lit, _ = decisions.pop()
            for l in trail[mark:]:
                value[abs(l)] = 0
            del trail[mark:]
            head = mark
            next_var = min(next_var, abs(lit))
            decisions.append((mark, -lit, True))
            assign(-lit)
            ok, head = propagate(head)


def decode(model: Sequence[bool], n: int) -> Preference:
    vt = VarTable(n)
    weak = frozenset((x, y) for x in range(n) for y in range(n) if model[vt.weak(x, y)])
    return Preference(weak, n)


def _check_strict_atoms(model: Sequence[bool], pref: Preference) -> Optional[str]:
    vt = VarTable(pref.n)
    strict = pref.strict
    for x in range(pref.n):
        for y in range(pref.n):
            if model[vt.strict(x, y)] != ((x, y) in strict):
                return f"strict atom ({x},{y}) disagrees with the weak part"
    return None


def decide(data: OrderPair, monoid: Monoid) -> Verdict:
    cnf = encode_phi(data, monoid)
    result = solve(cnf)
    if not result.sat:
        return Verdict(Status.NOT_RATIONALIZABLE, "sat")
    pref = decode(result.model, monoid.size)
    problems = preference_violations(pref, data, monoid)
    bad_strict = _check_strict_atoms(result.model, pref)
    if bad_strict:
        problems.append(bad_strict)
    if problems:
        raise VerificationFailure("; ".join(problems))
    return Verdict(Status.RATIONALIZABLE, "sat", preference=pref)


def forced(data: OrderPair, monoid: Monoid, query: Pair, strict: bool, cnf: Optional[Cnf] = None) -> bool:
    """Whether every rationalization ranks x ≽ y (or x ≻ y when ``strict``).

    A precomputed ``cnf`` is taken to be satisfiable already.
    """
    x, y = query
    vt = VarTable(monoid.size)
    if cnf is None:
        cnf = encode_phi(data, monoid)
        if not solve(cnf).sat:
            raise ValueError("instance is not rationalizable")
    opposite = vt.weak(y, x) if strict else vt.strict(y, x)
    return not solve(cnf.with_units(opposite)).sat


@dataclass(frozen=True)
class Enumeration:
    models: list[tuple[bool, ...]]
    complete: bool


def enumerate_models(cnf: Cnf, cap: int = 10_000) -> Enumeration:
    """All satisfying assignments by repeated solving with blocking clauses."""
    models: list[tuple[bool, ...]] = []
    blocked = Cnf(cnf.num_vars, list(cnf.clauses), cnf.metadata)
    while True:
        r = solve(blocked)
        if not r.sat:
            return Enumeration(models, True)
        if len(models) >= cap:
            return Enumeration(models, False)
        models.append(r.model)
        block = tuple(-v if r.model[v] else v for v in range(1, cnf.num_vars + 1))
        if not block:
            return Enumeration(models, True)
        blocked.clauses.append(block)


def to_dimacs(cnf: Cnf) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    lines.extend(" ".join(map(str, c)) + " 0" for c in cnf.clauses)
    return "\n".join(lines) + "\n"
