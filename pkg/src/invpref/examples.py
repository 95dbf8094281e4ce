"""Builders for the bundled example instances and random instance generators."""

from __future__ import annotations

import json
import random
from importlib import resources
from itertools import combinations_with_replacement, product
from typing import Callable, Optional

from .core import OrderPair, PartialTransform, Universe, normalize_data
from .instance import Instance, Options, make_instance, parse_document, to_document


def stationarity() -> Instance:
    """Reward streams of depth one with prepend transforms and two blocks of choices.

    Block one ranks ax ≻ by and bx ≻ ay, block two ranks cy ≻ dx and dy ≻ cx.
    """
    letters = "abcd"
    alts = ["x", "y"] + [f + s for s in "xy" for f in letters]
    transforms = {f: {"x": f + "x", "y": f + "y"} for f in letters}
    strict = [("ax", "by"), ("bx", "ay"), ("cy", "dx"), ("dy", "cx")]
    return make_instance(alts, transforms, strict=strict)


def prepend_streams(depth: int = 2) -> Instance:
    """Same choices on streams of length ≤ depth, where prepending does not commute."""
    letters = "abcd"
    words = [""]
    for d in range(1, depth + 1):
        words += ["".join(w) for w in product(letters, repeat=d)]
    alts = [w + s for w in words for s in "xy"]
    transforms = {
        f: {w + s: f + w + s for w in words if len(w) < depth for s in "xy"} for f in letters
    }
    strict = [("ax", "by"), ("bx", "ay"), ("cy", "dx"), ("dy", "cx")]
    return make_instance(alts, transforms, strict=strict)


def commuting_streams(depth: int = 2) -> Instance:
    """Same choices where alternatives record only how many of each letter were added."""
    letters = "abcd"
    bags = [""]
    for d in range(1, depth + 1):
        bags += ["".join(c) for c in _multisets(letters, d)]
    alts = [b + s for b in bags for s in "xy"]

    def add(f: str, bag: str) -> str:
        return "".join(sorted(bag + f))

    transforms = {f: {b + s: add(f, b) + s for b in bags if len(b) < depth for s in "xy"} for f in letters}
    strict = [("ax", "by"), ("bx", "ay"), ("cy", "dx"), ("dy", "cx")]
    return make_instance(alts, transforms, strict=strict)


def _multisets(letters: str, d: int) -> list[tuple[str, ...]]:
    return list(combinations_with_replacement(letters, d))


def dated_rewards() -> Instance:
    """Rewards a, b at dates 0..2 with the forward shift t ↦ t+1 where defined."""
    alts = [f"({z},{t})" for z in "ab" for t in range(3)]
    shift = {f"({z},{t})": f"({z},{t + 1})" for z in "ab" for t in range(2)}
    strict = [("(a,1)", "(b,2)"), ("(a,2)", "(b,1)")]
    return make_instance(alts, {"+1": shift}, strict=strict)


STATES = "ryb"


def event_label(mask: int) -> str:
    return "{" + ",".join(s for i, s in enumerate(STATES) if mask >> i & 1) + "}"


def ellsberg() -> Instance:
    """Events over one urn with union-with-disjoint-event transforms.

    Red is judged likelier than black, yet black-or-yellow likelier than red-or-yellow.
    """
    full = (1 << len(STATES)) - 1
    alts = [event_label(m) for m in range(full + 1)]
    transforms = {}
    for a in range(1, full + 1):
        transforms["∪" + event_label(a)] = {
            event_label(b): event_label(a | b) for b in range(full + 1) if a & b == 0
        }
    r, y, b = 1, 2, 4
    strict = [(event_label(r), event_label(b)), (event_label(b | y), event_label(r | y))]
    return make_instance(alts, transforms, strict=strict)


KRAFT_RANGE = range(-2, 4)
KRAFT_DIM = 5


def grid_label(v: tuple[int, ...]) -> str:
    return "(" + ",".join(str(c) for c in v) + ")"


def indicator(*coords: int) -> tuple[int, ...]:
    return tuple(1 if i + 1 in coords else 0 for i in range(KRAFT_DIM))


KRAFT_GENERATORS = {
    "+e4": (0, 0, 0, 1, 0),
    "+e5": (0, 0, 0, 0, 1),
    "+e1-e2": (1, -1, 0, 0, 0),
}

KRAFT_RELATIONS = [
    (indicator(2, 3, 5), indicator(1, 4)),
    (indicator(1, 5), indicator(2, 3)),
    (indicator(3, 4), indicator(2, 5)),
    (indicator(2), indicator(3, 5)),
]


def kraft_grid() -> Instance:
    """Four comparisons of five-coordinate indicator vectors on the grid {-2..3}^5,
    with translations along e4, e5 and e1−e2."""
    points = list(product(KRAFT_RANGE, repeat=KRAFT_DIM))
    alts = [grid_label(p) for p in points]
    lo, hi = KRAFT_RANGE.start, KRAFT_RANGE.stop - 1
    transforms = {}
    for name, v in KRAFT_GENERATORS.items():
        m = {}
        for p in points:
            q = tuple(a + b for a, b in zip(p, v))
            if all(lo <= c <= hi for c in q):
                m[grid_label(p)] = grid_label(q)
        transforms[name] = m
    strict = [(grid_label(a), grid_label(b)) for a, b in KRAFT_RELATIONS]
    return make_instance(alts, transforms, strict=strict)


def kraft_chain() -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """The four strict comparisons that close the cycle back to 𝟙₁₄, as (better, worse)."""
    e = indicator
    minus2 = lambda v: tuple(c - (1 if i == 1 else 0) for i, c in enumerate(v))  # noqa: E731
    plus5 = lambda v: tuple(c + (1 if i == 4 else 0) for i, c in enumerate(v))  # noqa: E731
    return [
        (e(2, 3, 5), e(1, 4)),
        (plus5(e(1, 5)), e(2, 3, 5)),
        (minus2(e(1, 3, 4, 5)), plus5(e(1, 5))),
        (e(1, 4), minus2(e(1, 3, 4, 5))),
    ]


# ---------------------------------------------------------------------------
# random instances


def random_data(rng: random.Random, n: int, density: float = 0.25, strict_share: float = 0.4) -> OrderPair:
    weak, strict = set(), set()
    for x in range(n):
        for y in range(n):
            if x != y and rng.random() < density:
                (strict if rng.random() < strict_share else weak).add((x, y))
    return OrderPair(frozenset(weak | strict), frozenset(strict))


def random_transform(rng: random.Random, n: int, name: str, defined: float = 0.7) -> PartialTransform:
    table = tuple(rng.randrange(n) if rng.random() < defined else -1 for _ in range(n))
    return PartialTransform(name, table)


def _instance(n: int, gens: list[PartialTransform], data: OrderPair, options: Options = Options()) -> Instance:
    universe = Universe(tuple(f"x{i}" for i in range(n)))
    norm, report = normalize_data(data, universe)
    return Instance(universe, tuple(gens), norm, options, report)


def random_identity_instance(rng: random.Random, max_n: int = 8) -> Instance:
    n = rng.randint(1, max_n)
    return _instance(n, [], random_data(rng, n, density=rng.uniform(0.05, 0.35)))


def random_general_instance(
    rng: random.Random, max_n: int = 6, max_monoid: int = 12, max_gens: int = 3
) -> Instance:
    """Random partial generators, rejected until the closed monoid has ≤ max_monoid elements."""
    from .core import generate_monoid

    while True:
        n = rng.randint(2, max_n)
        k = rng.randint(1, max_gens)
        gens = [random_transform(rng, n, f"g{i}", rng.uniform(0.3, 1.0)) for i in range(k)]
        universe = Universe(tuple(f"x{i}" for i in range(n)))
        m = generate_monoid(gens, universe, max_monoid + 1)
        if m.closed and len(m) <= max_monoid:
            break
    data = random_data(rng, n, density=rng.uniform(0.05, 0.3))
    return _instance(n, gens, data)


def random_commutative_instance(rng: random.Random, max_n: int = 7, max_gens: int = 3) -> Instance:
    """Total commuting generators: coordinate-wise maps on a grid a×b with a·b ≤ max_n,
    relabelled by a random permutation. With b = 1 they are powers of one map."""
    a = rng.randint(1, max_n)
    b = rng.randint(1, max_n // a)
    n = a * b
    cells = [(i, j) for i in range(a) for j in range(b)]
    perm = list(range(n))
    rng.shuffle(perm)
    label = {c: perm[k] for k, c in enumerate(cells)}
    f = [rng.randrange(a) for _ in range(a)]
    g = [rng.randrange(b) for _ in range(b)]
    choices = {
        "f": lambda c: (f[c[0]], c[1]),
        "g": lambda c: (c[0], g[c[1]]),
        "ff": lambda c: (f[f[c[0]]], c[1]),
        "fg": lambda c: (f[c[0]], g[c[1]]),
    }
    names = rng.sample(sorted(choices), rng.randint(1, max_gens))
    gens = []
    for name in names:
        table = [0] * n
        for c in cells:
            table[label[c]] = label[choices[name](c)]
        gens.append(PartialTransform(name, tuple(table)))
    data = random_data(rng, n, density=rng.uniform(0.05, 0.3))
    return _instance(n, gens, data)


def random_instance(seed: int, kind: str = "general") -> Instance:
    rng = random.Random(seed)
    makers: dict[str, Callable[[random.Random], Instance]] = {
        "general": random_general_instance,
        "identity": random_identity_instance,
        "commutative": random_commutative_instance,
    }
    return makers[kind](rng)


# ---------------------------------------------------------------------------
# bundled documents

BUILDERS: dict[str, Callable[[], Instance]] = {
    "stationarity": stationarity,
    "dated_rewards": dated_rewards,
    "commuting_reformulation": commuting_streams,
    "prepend_streams": prepend_streams,
    "ellsberg": ellsberg,
    "kraft_grid": kraft_grid,
    "random_seed42": lambda: random_instance(42),
}


def bundled_names() -> list[str]:
    return sorted(BUILDERS)


def bundled_text(name: str) -> str:
    return resources.files("invpref").joinpath("bundled", f"{name}.json").read_text(encoding="utf-8")


def load_bundled(name: str) -> Instance:
    return parse_document(json.loads(bundled_text(name)))


def render_bundled(name: str) -> str:
    doc = to_document(BUILDERS[name]())
    if name == "kraft_grid":
        return json.dumps(doc, ensure_ascii=False, separators=(",", ":")) + "\n"
    return json.dumps(doc, ensure_ascii=False, indent=1) + "\n"


def write_bundled(directory: Optional[str] = None) -> None:
    from pathlib import Path

    target = Path(directory) if directory else Path(__file__).parent / "bundled"
    target.mkdir(parents=True, exist_ok=True)
    for name in bundled_names():
        (target / f"{name}.json").write_text(render_bundled(name), encoding="utf-8")


if __name__ == "__main__":
    write_bundled()
