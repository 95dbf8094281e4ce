"""Broken cycles, forbidden subrelations, collapse and saturation.

A forbidden subrelation ⟨W, S⟩ reads as the all-negative clause
¬[a≽b] for (a,b) in W \\ S and ¬[a≻b] for (a,b) in S. Saturation runs a
given-clause loop over collapses until the empty pair appears, a fixpoint is
reached, or a limit cuts the search short.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import chain, combinations
from typing import Iterable, Iterator, Optional, Union

from .closure import Reach, find_cycle, m_closure, reachability, transitive_closure
from .core import (
    UNDEFINED,
    Monoid,
    OrderPair,
    Pair,
    Preference,
    Status,
    Universe,
    Verdict,
    preference_violations,
)

GAPS_ANY = "any"
GAPS_UNRELATED = "unrelated"


@dataclass(frozen=True)
class Limits:
    """Search limits. ``max_links`` defaults to |X|² when None."""

    max_links: Optional[int] = None
    max_clauses: int = 50_000
    max_width: int = 4
    cycle_budget: int = 20_000
    witness_budget: int = 2_000
    probe_budget: int = 200

    def links_for(self, n: int) -> int:
        return self.max_links if self.max_links is not None else n * n


@dataclass(frozen=True)
class Link:
    transform: int
    x: int
    y: int


@dataclass(frozen=True)
class BrokenCycle:
    """Links (ω_i, x_i, y_i) with ω_i(x_i) ≿_⊺ ω_{i+1}(y_{i+1}) cyclically."""

    links: tuple[Link, ...]
    strict: bool

    @property
    def gaps(self) -> frozenset[Pair]:
        return frozenset((l.y, l.x) for l in self.links)

    def format(self, universe: Universe, monoid: Monoid) -> str:
        return "; ".join(
            f"{monoid[l.transform].name}: {universe.label(l.x)},{universe.label(l.y)}" for l in self.links
        ) + (" (strict)" if self.strict else "")


@dataclass(frozen=True)
class ForbiddenSubrelation:
    pair: OrderPair
    provenance: object = field(default=None, compare=False)

    @property
    def width(self) -> int:
        return len(self.pair.weak)


@dataclass(frozen=True)
class AxiomStep:
    cycle: BrokenCycle
    result: OrderPair


@dataclass(frozen=True)
class CollapseStep:
    """Cancel ω(x,y) in the weak-only part of ``left`` against ω′(y,x) in ``right``."""

    left: int
    right: int
    cancelled: Pair
    outer: int
    inner: int
    result: OrderPair


Step = Union[AxiomStep, CollapseStep]


@dataclass(frozen=True)
class Derivation:
    steps: tuple[Step, ...]

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def conclusion(self) -> Optional[OrderPair]:
        return self.steps[-1].result if self.steps else None

    def axioms(self) -> list[AxiomStep]:
        return [s for s in self.steps if isinstance(s, AxiomStep)]

    def format(self, universe: Universe, monoid: Monoid) -> str:
        lab = universe.label
        lines = []
        for i, s in enumerate(self.steps):
            res = _format_ws(s.result, universe)
            if isinstance(s, AxiomStep):
                lines.append(f"{i} axiom - - {res} cycle[{s.cycle.format(universe, monoid)}]")
            else:
                x, y = s.cancelled
                lines.append(
                    f"{i} collapse {s.left},{s.right} ({lab(x)},{lab(y)}) {res} "
                    f"via[{monoid[s.outer].name}|{monoid[s.inner].name}]"
                )
        return "\n".join(lines)


def _format_ws(pair: OrderPair, universe: Universe) -> str:
    lab = universe.label

    def rel(ps: Iterable[Pair]) -> str:
        return "{" + ",".join(f"({lab(a)},{lab(b)})" for a, b in sorted(ps)) + "}"

    return f"W={rel(pair.weak)} S={rel(pair.strict)}"


# ---------------------------------------------------------------------------
# broken cycles


@dataclass
class BrokenCycles:
    cycles: list[BrokenCycle]
    complete: bool

    def __iter__(self) -> Iterator[BrokenCycle]:
        return iter(self.cycles)

    def __len__(self) -> int:
        return len(self.cycles)


def _related(data: OrderPair, x: int, y: int) -> bool:
    return (x, y) in data.weak or (y, x) in data.weak


def _gap_nodes(data: OrderPair, monoid: Monoid, gaps: str) -> list[Link]:
    n = monoid.size
    nodes = []
    for k, w in monoid.active():
        t = w.table
        dom = [x for x in range(n) if t[x] != UNDEFINED]
        for x in dom:
            for y in dom:
                if gaps == GAPS_UNRELATED and (x == y or _related(data, x, y)):
                    continue
                nodes.append(Link(k, x, y))
    return nodes


def _chain_strict(links: tuple[Link, ...], monoid: Monoid, reach: Reach) -> Optional[bool]:
    """None if some chain relation fails, else whether one of them is strict."""
    strict = False
    m = len(links)
    for i in range(m):
        a, b = links[i], links[(i + 1) % m]
        u = monoid[a.transform].table[a.x]
        v = monoid[b.transform].table[b.y]
        if u == UNDEFINED or v == UNDEFINED or not reach.has_weak(u, v):
            return None
        strict = strict or reach.has_strict(u, v)
    return strict


def enumerate_broken_cycles(
    data: OrderPair,
    monoid: Monoid,
    max_links: int,
    *,
    gaps: str = GAPS_UNRELATED,
    max_cycles: int = 100_000,
) -> BrokenCycles:
    """Simple cycles of length ≤ max_links in the gap graph, each once (rooted at its least node)."""
    n = monoid.size
    reach = reachability(data, n)
    nodes = _gap_nodes(data, monoid, gaps)
    tables = [w.table for w in monoid.elements]
    heads = [tables[l.transform][l.x] for l in nodes]
    tails = [tables[l.transform][l.y] for l in nodes]
    by_tail: dict[int, list[int]] = {}
    for j, v in enumerate(tails):
        by_tail.setdefault(v, []).append(j)
    succ = []
    for i in range(len(nodes)):
        row = reach.weak[heads[i]]
        out = sorted(j for v, js in by_tail.items() if row >> v & 1 for j in js)
        succ.append(out)
    found: list[BrokenCycle] = []
    complete = True
    for s in range(len(nodes)):
        path = [s]
        on_path = {s}
        stack = [iter(succ[s])]
        while stack:
            advanced = False
            for j in stack[-1]:
                if j == s:
                    links = tuple(nodes[i] for i in path)
                    strict = _chain_strict(links, monoid, reach)
                    found.append(BrokenCycle(links, bool(strict)))
                    if len(found) >= max_cycles:
                        return BrokenCycles(found, False)
                    continue
                if j < s or j in on_path or len(path) >= max_links:
                    continue
                path.append(j)
                on_path.add(j)
                stack.append(iter(succ[j]))
                advanced = True
                break
            if not advanced:
                stack.pop()
                on_path.discard(path.pop())
    return BrokenCycles(found, complete)


def forbidden_subrelations(cycle: BrokenCycle) -> list[ForbiddenSubrelation]:
    """Every ⟨W, S⟩ the cycle forbids: all S ⊆ W if strict, non-empty S otherwise."""
    gaps = sorted(cycle.gaps)
    start = 0 if cycle.strict else 1
    subsets = chain.from_iterable(combinations(gaps, r) for r in range(start, len(gaps) + 1))
    W = frozenset(gaps)
    return [ForbiddenSubrelation(OrderPair(W, frozenset(s)), cycle) for s in subsets]


# ---------------------------------------------------------------------------
# collapse


class PreimageIndex:
    """For each ordered pair (u,v), the pairs (x,y) and a transform mapping (x,y) to (u,v).

    ``partners(P)`` lists the j-side pairs Q that cancel an i-side weak literal P,
    with a witness (x, y, ω, ω′) such that ω(x,y) = P and ω′(y,x) = Q.
    """

    def __init__(self, monoid: Monoid) -> None:
        n = monoid.size
        self.n = n
        images: dict[Pair, dict[Pair, int]] = {}
        for k, w in monoid.active():
            t = w.table
            dom = [x for x in range(n) if t[x] != UNDEFINED]
            for x in dom:
                for y in dom:
                    images.setdefault((x, y), {}).setdefault((t[x], t[y]), k)
        self.images = images
        pre: dict[Pair, dict[Pair, int]] = {}
        for xy, imgs in images.items():
            for uv, k in imgs.items():
                pre.setdefault(uv, {}).setdefault(xy, k)
        self.pre = pre
        self._partners: dict[Pair, dict[Pair, tuple[int, int, int, int]]] = {}
        self._inverse: Optional[dict[Pair, dict[Pair, tuple[int, int, int, int]]]] = None

    def partners(self, P: Pair) -> dict[Pair, tuple[int, int, int, int]]:
        got = self._partners.get(P)
        if got is None:
            got = {}
            for (x, y), k in sorted(self.pre.get(P, {}).items()):
                for (a, b), k2 in sorted(self.images[(y, x)].items()):
                    got.setdefault((a, b), (x, y, k, k2))
            self._partners[P] = got
        return got

    def inverse(self) -> dict[Pair, dict[Pair, tuple[int, int, int, int]]]:
        if self._inverse is None:
            inv: dict[Pair, dict[Pair, tuple[int, int, int, int]]] = {}
            for P in sorted(self.pre):
                for Q, wit in self.partners(P).items():
                    inv.setdefault(Q, {}).setdefault(P, wit)
            self._inverse = inv
        return self._inverse


def _collapse_result(pi: OrderPair, P: Pair, pj: OrderPair, Q: Pair) -> OrderPair:
    weak = (pi.weak - {P}) | (pj.weak - {Q})
    strict = pi.strict | (pj.strict - {Q})
    return OrderPair(weak, strict)


def collapse(
    p1: ForbiddenSubrelation, p2: ForbiddenSubrelation, monoid: Monoid, index: Optional[PreimageIndex] = None
) -> list[ForbiddenSubrelation]:
    """All collapses of two forbidden subrelations, in either orientation."""
    if index is None:
        index = PreimageIndex(monoid)
    out: list[ForbiddenSubrelation] = []
    seen: set[OrderPair] = set()
    for left, right, a, b in ((p1, p2, 0, 1), (p2, p1, 1, 0)):
        for P in sorted(left.pair.weak - left.pair.strict):
            for Q, (x, y, k, k2) in index.partners(P).items():
                if Q not in right.pair.weak:
                    continue
                res = _collapse_result(left.pair, P, right.pair, Q)
                if res in seen:
                    continue
                seen.add(res)
                out.append(ForbiddenSubrelation(res, CollapseStep(a, b, (x, y), k, k2, res)))
    return out


# ---------------------------------------------------------------------------
# saturation

Key = tuple[int, ...]


@dataclass
class _Node:
    key: Key
    origin: object  # BrokenCycle or (left node, right node, x, y, ω, ω′)
    alive: bool = True


@dataclass
class SaturationResult:
    status: str  # "refuted", "saturated" or "exhausted"
    derivation: Optional[Derivation]
    clauses: list[ForbiddenSubrelation]
    complete: bool
    stats: dict

    @property
    def refuted(self) -> bool:
        return self.status == "refuted"

    def contains(self, pair: OrderPair) -> bool:
        return any(c.pair == pair for c in self.clauses)


def _core_cycles(n: int, reach: Reach) -> Iterator[tuple[Link, ...]]:
    """Identity-transform broken cycles of one and two links, mirroring the
    observations, completeness and coherence of strict comparisons."""
    for x in range(n):
        for y in range(n):
            if reach.has_weak(x, y):
                yield (Link(0, x, y),)
    for x in range(n):
        for y in range(x + 1, n):
            yield (Link(0, y, x), Link(0, x, y))


def _core_triangles(n: int) -> Iterator[tuple[Link, ...]]:
    """Three reflexive links closing a triangle, mirroring transitivity."""
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(a + 1, n):
                if c != b:
                    yield (Link(0, a, c), Link(0, b, a), Link(0, c, b))


class _Saturator:
    """Given-clause loop. A clause is a sorted tuple of literal codes: 2p for
    ¬[a≽b] and 2p+1 for ¬[a≻b], where p = a·n + b."""

    def __init__(self, data: OrderPair, monoid: Monoid, limits: Limits, subsumption: bool, gaps: str) -> None:
        self.data = data
        self.monoid = monoid
        self.n = monoid.size
        self.limits = limits
        self.subsumption = subsumption
        self.gaps = gaps
        self.reach = reachability(data, self.n)
        self.index = PreimageIndex(monoid)
        self.nodes: list[_Node] = []
        self.keys: dict[Key, int] = {}
        self.occurs: dict[int, list[int]] = {}
        self.by_pairs: dict[tuple[int, ...], list[int]] = {}
        self.active_weak: dict[int, list[int]] = {}
        self.active_any: dict[int, list[int]] = {}
        self.heap: list[tuple[int, Key, int]] = []
        self.truncated = False
        self.clause_limit_hit = False
        self.f0_complete = True
        self.empty: Optional[int] = None
        self.pending_triangles = True
        self.stats = {"axioms": 0, "generated": 0, "subsumed": 0, "dropped_wide": 0, "given": 0}

    def to_pair(self, key: Key) -> OrderPair:
        n = self.n
        weak = frozenset(divmod(l >> 1, n) for l in key)
        strict = frozenset(divmod(l >> 1, n) for l in key if l & 1)
        return OrderPair(weak, strict)

    def _dominated(self, key: Key, proper: bool) -> bool:
        """Some live clause other than ``key`` itself implies ``key``: its pairs are a
        subset of key's pairs and each of its literals is in ``key`` or weakens one."""
        if not self.subsumption:
            return not proper and key in self.keys
        lits = set(key)
        pairs = tuple(l >> 1 for l in key)
        if len(pairs) <= 10:
            candidates = chain.from_iterable(
                self.by_pairs.get(sub, ()) for r in range(1, len(pairs) + 1) for sub in combinations(pairs, r)
            )
        else:
            candidates = set().union(*(self.occurs.get(p, ()) for p in pairs))
        for nid in candidates:
            node = self.nodes[nid]
            if not node.alive or (proper and node.key == key):
                continue
            if all(l in lits or (not l & 1 and l + 1 in lits) for l in node.key):
                return True
        return False

    def add(self, key: Key, origin: object) -> Optional[int]:
        if not key:
            nid = len(self.nodes)
            self.nodes.append(_Node(key, origin))
            self.empty = nid
            return nid
        if len(key) > self.limits.max_width:
            if not self._dominated(key, proper=False):
                self.truncated = True
                self.stats["dropped_wide"] += 1
            return None
        if key in self.keys or self._dominated(key, proper=False):
            self.stats["subsumed"] += 1
            return None
        nid = len(self.nodes)
        self.nodes.append(_Node(key, origin))
        self.keys[key] = nid
        for l in key:
            self.occurs.setdefault(l >> 1, []).append(nid)
        self.by_pairs.setdefault(tuple(l >> 1 for l in key), []).append(nid)
        heapq.heappush(self.heap, (len(key), key, nid))
        return nid

    def add_cycle(self, links: tuple[Link, ...]) -> None:
        if self.gaps == GAPS_UNRELATED and any(l.x == l.y or _related(self.data, l.x, l.y) for l in links):
            return
        strict = _chain_strict(links, self.monoid, self.reach)
        if strict is None:
            return
        cycle = BrokenCycle(links, strict)
        n = self.n
        W = sorted(a * n + b for a, b in cycle.gaps)
        if len(W) > self.limits.max_width:
            return
        if self.subsumption:
            if strict:
                variants = [tuple(2 * p for p in W)]
            else:
                variants = [tuple(2 * p + (p == q) for p in W) for q in W]
        else:
            variants = []
            for fs in forbidden_subrelations(cycle):
                st = {a * n + b for a, b in fs.pair.strict}
                variants.append(tuple(2 * p + (p in st) for p in W))
        for key in variants:
            if self.add(key, cycle) is not None:
                self.stats["axioms"] += 1
            if self.empty is not None:
                return

    def build_f0(self) -> None:
        for links in _core_cycles(self.n, self.reach):
            self.add_cycle(links)
            if self.empty is not None:
                return
        self._general_cycles()

    def add_triangles(self) -> None:
        # width-3 axioms only matter once selection reaches width 3
        self.pending_triangles = False
        for links in _core_triangles(self.n):
            self.add_cycle(links)
            if self.empty is not None:
                return

    def _general_cycles(self) -> None:
        """Budgeted iterative deepening over the gap graph with image-deduplicated nodes."""
        monoid = self.monoid
        reach = self.reach
        n = self.n
        seen: dict[tuple[int, int, int, int], Link] = {}
        for link in _gap_nodes(self.data, monoid, self.gaps):
            t = monoid[link.transform].table
            seen.setdefault((link.x, link.y, t[link.x], t[link.y]), link)
        keys = sorted(seen)
        nodes = [seen[k] for k in keys]
        heads = [k[2] for k in keys]
        tails = [k[3] for k in keys]
        gap = [k[1] * n + k[0] for k in keys]
        by_tail: dict[int, list[int]] = {}
        for j, v in enumerate(tails):
            by_tail.setdefault(v, []).append(j)
        succ_cache: dict[int, list[int]] = {}

        def succ(i: int) -> list[int]:
            out = succ_cache.get(i)
            if out is None:
                row = reach.weak[heads[i]]
                out = sorted(j for v, js in by_tail.items() if row >> v & 1 for j in js)
                succ_cache[i] = out
            return out

        budget = self.limits.cycle_budget
        max_links = self.limits.links_for(n)
        width = self.limits.max_width
        spent = 0
        for length in range(1, max_links + 1):
            for s in range(len(nodes)):
                path = [s]
                stack = [iter(succ(s))]
                while stack:
                    spent += 1
                    if spent > budget:
                        self.f0_complete = False
                        return
                    advanced = False
                    for j in stack[-1]:
                        if j == s:
                            if len(path) == length:
                                self.add_cycle(tuple(nodes[i] for i in path))
                                if self.empty is not None:
                                    return
                            continue
                        if j < s or j in path or len(path) >= length:
                            continue
                        if gap[j] not in {gap[i] for i in path} and len({gap[i] for i in path}) >= width:
                            continue
                        path.append(j)
                        stack.append(iter(succ(j)))
                        advanced = True
                        break
                    if not advanced:
                        stack.pop()
                        path.pop()

    def activate(self, nid: int) -> None:
        for l in self.nodes[nid].key:
            if not l & 1:
                self.active_weak.setdefault(l >> 1, []).append(nid)
            self.active_any.setdefault(l >> 1, []).append(nid)

    def backward(self, nid: int) -> None:
        key = self.nodes[nid].key
        lists = [self.active_any.get(l >> 1, []) for l in key]
        for other in list(min(lists, key=len)):
            node = self.nodes[other]
            if other == nid or not node.alive:
                continue
            lits = set(node.key)
            if all(l in lits or (not l & 1 and l + 1 in lits) for l in key):
                node.alive = False

    def collapse_with_active(self, g: int) -> None:
        n = self.n
        key = self.nodes[g].key
        partners = self.index.partners
        inverse = self.index.inverse()
        for l in key:
            if l & 1:
                continue
            p = l >> 1
            for Q, wit in partners(divmod(p, n)).items():
                q = Q[0] * n + Q[1]
                for d in self.active_any.get(q, ()):
                    if self.nodes[d].alive:
                        self._emit(g, p, d, q, wit)
                        if self.empty is not None or self.clause_limit_hit:
                            return
        for l in key:
            q = l >> 1
            for P, wit in inverse.get(divmod(q, n), {}).items():
                p = P[0] * n + P[1]
                for d in self.active_weak.get(p, ()):
                    if d != g and self.nodes[d].alive:
                        self._emit(d, p, g, q, wit)
                        if self.empty is not None or self.clause_limit_hit:
                            return

    def _emit(self, i: int, p: int, j: int, q: int, wit: tuple[int, int, int, int]) -> None:
        drop_i = 2 * p
        drop_j = (2 * q, 2 * q + 1)
        lits = {l for l in self.nodes[i].key if l != drop_i}
        lits.update(l for l in self.nodes[j].key if l not in drop_j)
        key = tuple(sorted(l for l in lits if l & 1 or l + 1 not in lits))
        self.stats["generated"] += 1
        self.add(key, (i, j) + wit)
        if len(self.keys) >= self.limits.max_clauses:
            self.clause_limit_hit = True

    def run(self) -> SaturationResult:
        self.build_f0()
        while self.empty is None and not self.clause_limit_hit:
            if self.pending_triangles and (not self.heap or self.heap[0][0] >= 3):
                self.add_triangles()
                continue
            if not self.heap:
                break
            _, _, nid = heapq.heappop(self.heap)
            node = self.nodes[nid]
            if not node.alive:
                continue
            if self._dominated(node.key, proper=True):
                node.alive = False
                continue
            self.stats["given"] += 1
            self.activate(nid)
            if self.subsumption:
                self.backward(nid)
            self.collapse_with_active(nid)
        self.stats["clauses"] = len(self.keys)
        self.stats["f0_complete"] = self.f0_complete
        if self.empty is not None:
            return SaturationResult("refuted", self.derivation(self.empty), [], False, self.stats)
        clauses = [
            ForbiddenSubrelation(self.to_pair(node.key), node.origin)
            for node in self.nodes
            if node.alive and node.key in self.keys
        ]
        exhausted = self.clause_limit_hit or bool(self.heap) or self.pending_triangles
        complete = (
            not exhausted
            and not self.truncated
            and self.monoid.closed
            and self.gaps == GAPS_ANY
            and self.limits.max_width >= 3
        )
        status = "saturated" if complete else "exhausted"
        return SaturationResult(status, None, clauses, complete, self.stats)

    def derivation(self, root: int) -> Derivation:
        order: list[int] = []
        placed: dict[int, int] = {}
        stack = [(root, False)]
        while stack:
            nid, expanded = stack.pop()
            if nid in placed:
                continue
            origin = self.nodes[nid].origin
            if expanded or isinstance(origin, BrokenCycle):
                placed[nid] = len(order)
                order.append(nid)
                continue
            stack.append((nid, True))
            for parent in (origin[1], origin[0]):
                if parent not in placed:
                    stack.append((parent, False))
        steps: list[Step] = []
        for nid in order:
            node = self.nodes[nid]
            result = self.to_pair(node.key)
            if isinstance(node.origin, BrokenCycle):
                steps.append(AxiomStep(node.origin, result))
            else:
                i, j, x, y, k, k2 = node.origin
                steps.append(CollapseStep(placed[i], placed[j], (x, y), k, k2, result))
        return Derivation(tuple(steps))


def saturate(
    data: OrderPair,
    monoid: Monoid,
    limits: Optional[Limits] = None,
    *,
    subsumption: bool = True,
    gaps: str = GAPS_ANY,
) -> SaturationResult:
    """Collapse closure of the broken-cycle forbidden subrelations."""
    return _Saturator(data, monoid, limits or Limits(), subsumption, gaps).run()


# ---------------------------------------------------------------------------
# rationalization search


def _violates(clause: tuple[frozenset[Pair], frozenset[Pair]], pair: OrderPair) -> bool:
    wk, st = clause
    return wk <= pair.weak and st <= pair.strict


def _close(pair: OrderPair, monoid: Monoid, n: int) -> OrderPair:
    while True:
        nxt = transitive_closure(m_closure(pair, monoid), n)
        if nxt == pair:
            return pair
        pair = nxt


def search_rationalization(
    data: OrderPair,
    monoid: Monoid,
    clauses: Iterable[ForbiddenSubrelation] = (),
    budget: int = 2_000,
) -> Optional[Preference]:
    """Depth-first extension of the data, closing under images and transitivity
    after each decision and pruning on cycles and known forbidden subrelations.

    Returns a verified rationalization or None when the budget runs out or the
    search space is exhausted.
    """
    n = monoid.size
    forbidden = [(c.pair.weak - c.pair.strict, c.pair.strict) for c in clauses]
    singles_strict: set[Pair] = set()
    for wk, st in forbidden:
        if len(wk) == 1 and not st:
            (p,) = wk
            singles_strict.add((p[1], p[0]))
    spent = 0

    def ok(pair: OrderPair) -> bool:
        if find_cycle(pair, n) is not None:
            return False
        return not any(_violates(c, pair) for c in forbidden)

    start = _close(data, monoid, n)
    if not ok(start):
        return None

    def undecided(pair: OrderPair) -> Optional[Pair]:
        for x in range(n):
            for y in range(x + 1, n):
                a = (x, y) in pair.weak
                b = (y, x) in pair.weak
                if a and b:
                    continue
                if (a and (x, y) in pair.strict) or (b and (y, x) in pair.strict):
                    continue
                return (x, y)
        return None

    def options(pair: OrderPair, x: int, y: int) -> list[OrderPair]:
        a = (x, y) in pair.weak
        b = (y, x) in pair.weak
        strict_xy = OrderPair(pair.weak | {(x, y)}, pair.strict | {(x, y)})
        strict_yx = OrderPair(pair.weak | {(y, x)}, pair.strict | {(y, x)})
        tie = OrderPair(pair.weak | {(x, y), (y, x)}, pair.strict)
        if a:
            return [strict_xy, tie]
        if b:
            return [strict_yx, tie]
        if (y, x) in singles_strict:
            return [strict_yx]
        if (x, y) in singles_strict:
            return [strict_xy]
        return [strict_xy, strict_yx, tie]

    def dfs(pair: OrderPair) -> Optional[OrderPair]:
        nonlocal spent
        nxt = undecided(pair)
        if nxt is None:
            return pair
        for cand in options(pair, *nxt):
            spent += 1
            if spent > budget:
                return None
            closed = _close(cand, monoid, n)
            if ok(closed):
                got = dfs(closed)
                if got is not None:
                    return got
            if spent > budget:
                return None
        return None

    final = dfs(start)
    if final is None:
        return None
    pref = Preference(final.weak, n)
    return pref if not preference_violations(pref, data, monoid) else None


# ---------------------------------------------------------------------------
# decisions and checking


def decide_general(
    data: OrderPair, monoid: Monoid, limits: Optional[Limits] = None, *, gaps: str = GAPS_ANY
) -> Verdict:
    limits = limits or Limits()
    # a cheap unguided probe settles most rationalizable data before saturation,
    # which on such data runs until a limit is hit
    pref = search_rationalization(data, monoid, (), limits.probe_budget)
    if pref is not None:
        return Verdict(Status.RATIONALIZABLE, "witness", preference=pref)
    res = saturate(data, monoid, limits, gaps=gaps)
    if res.refuted:
        return Verdict(Status.NOT_RATIONALIZABLE, "collapse", derivation=res.derivation)
    if res.complete:
        return Verdict(Status.RATIONALIZABLE, "collapse")
    pref = search_rationalization(data, monoid, res.clauses, limits.witness_budget)
    if pref is not None:
        return Verdict(Status.RATIONALIZABLE, "collapse+witness", preference=pref)
    reasons = []
    if not monoid.closed:
        reasons.append("monoid truncated")
    if res.stats.get("dropped_wide"):
        reasons.append("clauses dropped by max_width")
    if res.stats.get("clauses", 0) >= limits.max_clauses:
        reasons.append("max_clauses reached")
    reason = ", ".join(reasons) or "saturation incomplete"
    return Verdict(Status.UNKNOWN, "collapse", reason=reason + "; consult the SAT oracle")


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    bad_step: Optional[int] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _plain_closure(data: OrderPair, n: int) -> tuple[set[Pair], set[Pair]]:
    """Closure by explicit search over (node, used-strict) states, kept separate
    from the bitset implementation so the checker does not trust it."""
    out: dict[int, list[tuple[int, bool]]] = {x: [] for x in range(n)}
    for a, b in data.weak | data.strict:
        out[a].append((b, (a, b) in data.strict))
    weak: set[Pair] = set()
    strict: set[Pair] = set()
    for x in range(n):
        seen = {(x, False)}
        todo = [(x, False)]
        while todo:
            v, s = todo.pop()
            weak.add((x, v))
            if s:
                strict.add((x, v))
            for w, e in out[v]:
                st = (w, s or e)
                if st not in seen:
                    seen.add(st)
                    todo.append(st)
    return weak, strict


def check_derivation(
    d: Derivation,
    data: OrderPair,
    monoid: Monoid,
    *,
    refutation: bool = True,
    gaps: str = GAPS_ANY,
) -> CheckResult:
    n = monoid.size
    weak_t, strict_t = _plain_closure(data, n)
    results: list[OrderPair] = []
    for i, step in enumerate(d.steps):
        if isinstance(step, AxiomStep):
            err = _check_axiom(step, data, monoid, weak_t, strict_t, gaps)
        elif isinstance(step, CollapseStep):
            err = _check_collapse(step, i, results, monoid)
        else:
            err = "unknown step kind"
        if err:
            return CheckResult(False, i, err)
        results.append(step.result)
    if refutation:
        if not results:
            return CheckResult(False, None, "empty derivation")
        if not results[-1].is_empty:
            return CheckResult(False, len(results) - 1, "last step is not the empty pair")
    return CheckResult(True)


def _check_axiom(step: AxiomStep, data, monoid, weak_t, strict_t, gaps) -> str:
    links = step.cycle.links
    if not links:
        return "broken cycle has no links"
    m = len(links)
    strict = False
    for l in links:
        if not 0 <= l.transform < len(monoid):
            return "unknown transform"
        t = monoid[l.transform].table
        if t[l.x] == UNDEFINED or t[l.y] == UNDEFINED:
            return "link outside the transform's domain"
        if gaps == GAPS_UNRELATED and (l.x == l.y or _related(data, l.x, l.y)):
            return "gap is related in the data"
    for i in range(m):
        a, b = links[i], links[(i + 1) % m]
        u = monoid[a.transform].table[a.x]
        v = monoid[b.transform].table[b.y]
        if (u, v) not in weak_t:
            return f"chain relation {i} does not hold"
        strict = strict or (u, v) in strict_t
    if strict != step.cycle.strict:
        return "strictness flag is wrong"
    W = frozenset((l.y, l.x) for l in links)
    res = step.result
    if res.weak != W:
        return "W is not the gap set"
    if not res.strict <= W:
        return "S is not inside W"
    if not strict and not res.strict:
        return "non-strict cycle needs non-empty S"
    return ""


def _check_collapse(step: CollapseStep, i: int, results: list[OrderPair], monoid: Monoid) -> str:
    if not (0 <= step.left < i and 0 <= step.right < i):
        return "parent index does not refer to an earlier step"
    if not (0 <= step.outer < len(monoid) and 0 <= step.inner < len(monoid)):
        return "unknown transform"
    x, y = step.cancelled
    n = monoid.size
    if not (0 <= x < n and 0 <= y < n):
        return "cancelled pair outside the universe"
    t1 = monoid[step.outer].table
    t2 = monoid[step.inner].table
    if UNDEFINED in (t1[x], t1[y], t2[x], t2[y]):
        return "cancelled pair outside a transform's domain"
    P = (t1[x], t1[y])
    Q = (t2[y], t2[x])
    li, rj = results[step.left], results[step.right]
    if P not in li.weak or P in li.strict:
        return "left pair is not a weak-only comparison"
    if Q not in rj.weak:
        return "right pair is not present"
    if step.result != _collapse_result(li, P, rj, Q):
        return "result does not match the collapse"
    return ""
