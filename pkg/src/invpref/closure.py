"""Transitive closure, M-closure, cycle witnesses and the commutative decision."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .core import (
    UNDEFINED,
    Monoid,
    OrderPair,
    Pair,
    PartialTransform,
    Status,
    Universe,
    Verdict,
    compose,
)


class NotApplicable(Exception):
    """The commutative decision procedure does not apply to this monoid."""


def _nodes(pair: OrderPair) -> int:
    ids = pair.ids()
    return max(ids) + 1 if ids else 0


def _adjacency(pairs, n: int) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in pairs:
        adj[a].append(b)
    for row in adj:
        row.sort()
    return adj


def strongly_connected_components(adj: list[list[int]]) -> list[int]:
    """Iterative Tarjan; returns the component number of each node.

    Components are numbered in reverse topological order: every edge goes
    from a component to one with an equal or smaller number.
    """
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(adj[v]):
                work[-1] = (v, i + 1)
                w = adj[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


@dataclass(frozen=True)
class Reach:
    """Bitset rows: bit y of ``weak[x]`` is set iff x ≿_⊺ y, likewise for strict."""

    weak: tuple[int, ...]
    strict: tuple[int, ...]

    def has_weak(self, x: int, y: int) -> bool:
        return bool(self.weak[x] >> y & 1)

    def has_strict(self, x: int, y: int) -> bool:
        return bool(self.strict[x] >> y & 1)


def reachability(pair: OrderPair, n: Optional[int] = None) -> Reach:
    """Reflexive weak reachability and strict-path reachability as bitsets."""
    if n is None:
        n = _nodes(pair)
    adj = _adjacency(pair.weak | pair.strict, n)
    comp = strongly_connected_components(adj)
    ncomp = max(comp) + 1 if n else 0
    members: list[list[int]] = [[] for _ in range(ncomp)]
    for v, c in enumerate(comp):
        members[c].append(v)
    strict_out: list[list[int]] = [[] for _ in range(ncomp)]
    for a, b in pair.strict:
        strict_out[comp[a]].append(b)
    creach = [0] * ncomp
    csreach = [0] * ncomp
    # Tarjan numbers components sinks first, so successors are already done
    for c in range(ncomp):
        r = 0
        s = 0
        for v in members[c]:
            r |= 1 << v
            for w in adj[v]:
                d = comp[w]
                if d != c:
                    r |= creach[d]
                    s |= csreach[d]
        creach[c] = r
        for b in strict_out[c]:
            s |= creach[comp[b]]
        csreach[c] = s
    return Reach(tuple(creach[comp[v]] for v in range(n)), tuple(csreach[comp[v]] for v in range(n)))


def _bits(row: int) -> list[int]:
    out = []
    while row:
        low = row & -row
        out.append(low.bit_length() - 1)
        row ^= low
    return out


def transitive_closure(pair: OrderPair, n: Optional[int] = None) -> OrderPair:
    """Weak reachability closure; strict iff some path uses a strict edge.

    The result is reflexive on every node 0..n-1, as data is after normalization.
    """
    reach = reachability(pair, n)
    weak = {(x, y) for x, row in enumerate(reach.weak) for y in _bits(row)}
    strict = {(x, y) for x, row in enumerate(reach.strict) for y in _bits(row)}
    return OrderPair(frozenset(weak), frozenset(strict))


def m_closure(pair: OrderPair, monoid: Monoid) -> OrderPair:
    """Images of every data comparison under every transform defined on both ends."""
    weak = set(pair.weak)
    strict = set(pair.strict)
    off_weak = [(x, y) for x, y in pair.weak if x != y]
    for w in monoid.elements:
        t = w.table
        if w.is_identity or w.is_empty:
            continue
        for x, y in off_weak:
            u, v = t[x], t[y]
            if u != UNDEFINED and v != UNDEFINED:
                weak.add((u, v))
        for x, y in pair.strict:
            u, v = t[x], t[y]
            if u != UNDEFINED and v != UNDEFINED:
                strict.add((u, v))
                weak.add((u, v))
    return OrderPair(frozenset(weak), frozenset(strict))


@dataclass(frozen=True)
class CycleWitness:
    """A closed walk nodes[0] ≻ nodes[1] ≿ … ≿ nodes[-1] ≿ nodes[0].

    ``strict[i]`` records whether the step nodes[i] → nodes[i+1] (cyclically)
    is a strict comparison in the relation the witness was taken from.
    """

    nodes: tuple[int, ...]
    strict: tuple[bool, ...]

    def edges(self) -> list[Pair]:
        k = len(self.nodes)
        return [(self.nodes[i], self.nodes[(i + 1) % k]) for i in range(k)]

    def verify(self, pair: OrderPair) -> bool:
        if not self.nodes or not any(self.strict):
            return False
        for (a, b), s in zip(self.edges(), self.strict):
            if s and (a, b) not in pair.strict:
                return False
            if (a, b) not in pair.weak and (a, b) not in pair.strict:
                return False
        return True

    def format(self, universe: Universe) -> str:
        parts = [universe.label(self.nodes[0])]
        for (a, b), s in zip(self.edges(), self.strict):
            parts.append("≻" if s else "≿")
            parts.append(universe.label(b))
        return " ".join(parts)


def find_cycle(pair: OrderPair, n: Optional[int] = None) -> Optional[CycleWitness]:
    """Shortest cycle through the lexicographically first strict edge inside an SCC."""
    if n is None:
        n = _nodes(pair)
    edges = pair.weak | pair.strict
    adj = _adjacency(edges, n)
    comp = strongly_connected_components(adj)
    candidates = sorted((a, b) for a, b in pair.strict if comp[a] == comp[b])
    if not candidates:
        return None
    u, v = candidates[0]
    if u == v:
        return CycleWitness((u,), (True,))
    c = comp[u]
    # distances to u inside the component, then a greedy lexicographic walk from v
    radj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        if comp[a] == c and comp[b] == c:
            radj[b].append(a)
    dist = {u: 0}
    queue = deque([u])
    while queue:
        b = queue.popleft()
        for a in radj[b]:
            if a not in dist:
                dist[a] = dist[b] + 1
                queue.append(a)
    path = [u, v]
    node = v
    while node != u:
        node = min(w for w in adj[node] if dist.get(w, -1) == dist[node] - 1)
        path.append(node)
    nodes = tuple(path[:-1])
    k = len(nodes)
    flags = tuple(
        i == 0 or (nodes[i], nodes[(i + 1) % k]) in pair.strict for i in range(k)
    )
    return CycleWitness(nodes, flags)


@dataclass(frozen=True)
class Commutativity:
    commutative: bool
    counterexample: Optional[tuple[str, str, int]] = None

    def __bool__(self) -> bool:
        return self.commutative


def commute_at(a: PartialTransform, b: PartialTransform) -> Optional[int]:
    """First point where a∘b and b∘a differ in definedness or value, if any."""
    ab = compose(a, b).table
    ba = compose(b, a).table
    for x, (p, q) in enumerate(zip(ab, ba)):
        if p != q:
            return x
    return None


def is_commutative(monoid: Monoid, universe: Optional[Universe] = None) -> Commutativity:
    """Generators pairwise commute, with equal composition domains."""
    gens = list(monoid.elements[1 : 1 + _distinct_generator_count(monoid)])
    for i, a in enumerate(gens):
        for b in gens[i + 1 :]:
            x = commute_at(a, b)
            if x is not None:
                return Commutativity(False, (a.name, b.name, x))
    return Commutativity(True)


def _distinct_generator_count(monoid: Monoid) -> int:
    seen = {monoid.elements[0].table}
    count = 0
    for g in monoid.generators:
        if g.table not in seen:
            seen.add(g.table)
            count += 1
    return min(count, len(monoid.elements) - 1)


def decide_commutative(data: OrderPair, monoid: Monoid) -> Verdict:
    """Acyclicity test on the M-closure for commuting, closed families.

    A cycle always refutes. Acyclicity only certifies rationalizability when
    every transform is total; partial commuting families are refused then.
    """
    comm = is_commutative(monoid)
    if not comm:
        raise NotApplicable(f"transforms {comm.counterexample[0]} and {comm.counterexample[1]} do not commute")
    if not monoid.closed:
        raise NotApplicable("monoid generation was truncated by the cap")
    n = monoid.size
    closed_pair = m_closure(data, monoid)
    cycle = find_cycle(closed_pair, n)
    if cycle is not None:
        return Verdict(Status.NOT_RATIONALIZABLE, "commutative", cycle=cycle)
    if not monoid.all_total:
        raise NotApplicable("acyclic closure is not conclusive for partial transforms")
    return Verdict(Status.RATIONALIZABLE, "commutative")
