"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line; pytest prints them in the terminal summary
and ``python tests/test_acceptance.py`` prints them directly.
"""

import io
import random
import sys
import time
from dataclasses import replace
from functools import lru_cache
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from invpref import examples, sat_oracle  # noqa: E402
from invpref.cli import main  # noqa: E402
from invpref.closure import decide_commutative, is_commutative, m_closure  # noqa: E402
from invpref.core import OrderPair, Status  # noqa: E402
from invpref.predictions import forced_by_sat, forced_comparisons  # noqa: E402
from invpref.price import (  # noqa: E402
    homothetic_check,
    homothetic_factors,
    quasilinear_check,
    quasilinear_weights,
    translation_check,
    translation_weights,
)
from invpref.refutation import AxiomStep, BrokenCycle, CollapseStep, Derivation, Limits, Link, check_derivation, decide_general  # noqa: E402

from oracles import has_cycle, min_cycle_product, min_cycle_sum  # noqa: E402
from price_models import cobb_douglas_data, quasilinear_data, random_dataset, translation_data  # noqa: E402

# pinned thresholds
WORKED_EXAMPLE_SECONDS = 1.0
KRAFT_SECONDS = 10.0
COMMUTATIVE_BATCH_SECONDS = 60.0
REQUIRED_AGREEMENT = 1.0
MAX_UNKNOWN_RATE = 0.20

IDENTITY_INSTANCES = 500
IDENTITY_MAX_N = 8
COMMUTATIVE_INSTANCES = 200
COMMUTATIVE_MAX_N = 7
COMMUTATIVE_MAX_GENS = 3
GENERAL_INSTANCES = 200
GENERAL_MAX_N = 6
GENERAL_MAX_MONOID = 12
GENERAL_LIMITS = Limits(max_links=8, max_clauses=50_000, max_width=4)
PREDICTION_INSTANCES = 100
PREDICTION_MAX_N = 5
PRICE_DATASETS = 100
PRICE_MAX_OBS = 6
PRICE_MAX_DIM = 4
MODEL_DATASETS_PER_UTILITY = 30
MUTATIONS = 1000

RESULTS: list[str] = []


def record(number, title, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'}  {number:2d}. {title}: {detail}"
    RESULTS.append(line)
    print(line)
    return passed


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def rate(hits, total):
    return hits / total if total else 1.0


# 1. stationarity


def criterion_1():
    inst = examples.load_bundled("stationarity")
    u, m = inst.universe, inst.monoid()
    x, y = u.id("x"), u.id("y")

    def run():
        return decide_general(inst.data, m), sat_oracle.decide(inst.data, m)

    (general, sat), secs = timed(run)
    d = general.derivation
    expected = {OrderPair(frozenset({(y, x)}), frozenset()), OrderPair(frozenset({(x, y)}), frozenset())}
    ok = (
        general.status == Status.NOT_RATIONALIZABLE
        and sat.status == Status.NOT_RATIONALIZABLE
        and {s.result for s in d.axioms()} == expected
        and len(d.axioms()) == 2
        and d.conclusion.is_empty
        and bool(check_derivation(d, inst.data, m))
        and secs < WORKED_EXAMPLE_SECONDS
    )
    return record(1, "stationarity refutation", ok, f"collapse {general.status.value}, sat {sat.status.value}, {len(d)} steps, {secs:.3f} s")


# 2. dated rewards


def criterion_2():
    inst = examples.load_bundled("dated_rewards")
    u, m = inst.universe, inst.monoid()
    target = (u.id("(a,0)"), u.id("(b,0)"))

    def run():
        code = main(["check", "dated_rewards"], io.StringIO())
        return code, forced_comparisons(inst.data, m), forced_by_sat(inst.data, m)

    (code, scan, sat), secs = timed(run)
    ok = (
        code == Status.RATIONALIZABLE.exit_code
        and target in scan.strict
        and scan.source[(*target, "strict")] == "collapse"
        and target in sat.strict
        and secs < WORKED_EXAMPLE_SECONDS
    )
    return record(2, "knock-on prediction", ok, f"check exit {code}, (a,0)≻(b,0) scan={target in scan.strict} sat={target in sat.strict}, {secs:.3f} s")


# 3. commuting reformulation


def criterion_3():
    def run():
        plain = examples.load_bundled("prepend_streams")
        pm = plain.monoid()
        general = decide_general(plain.data, pm)
        commutes = bool(is_commutative(pm))
        variant = examples.load_bundled("commuting_reformulation")
        u, vm = variant.universe, variant.monoid()
        closed = m_closure(variant.data, vm)
        chain = ["adx", "bdy", "bcx", "acy", "adx"]
        in_closure = all((u.id(a), u.id(b)) in closed.strict for a, b in zip(chain, chain[1:]))
        return general, commutes, in_closure, decide_commutative(variant.data, vm)

    (general, commutes, in_closure, comm), secs = timed(run)
    ok = (
        general.status == Status.NOT_RATIONALIZABLE
        and not commutes
        and in_closure
        and comm.status == Status.NOT_RATIONALIZABLE
        and secs < WORKED_EXAMPLE_SECONDS
    )
    return record(
        3, "commuting reformulation", ok,
        f"non-commuting {general.status.value}, closure cycle adx≻bdy≻bcx≻acy≻adx {in_closure}, commutative {comm.status.value}, {secs:.3f} s",
    )


# 4. Ellsberg


def criterion_4():
    inst = examples.load_bundled("ellsberg")
    m = inst.monoid()
    v, secs = timed(lambda: decide_general(inst.data, m))
    d = v.derivation
    ok = (
        v.status == Status.NOT_RATIONALIZABLE
        and len(d) == 3
        and len(d.axioms()) == 2
        and bool(check_derivation(d, inst.data, m))
        and secs < WORKED_EXAMPLE_SECONDS
    )
    return record(4, "Ellsberg", ok, f"{v.status.value}, {len(d) if d else 0} steps ({len(d.axioms()) if d else 0} axioms), {secs:.3f} s")


# 5. Kraft grid


def criterion_5():
    def run():
        inst = examples.load_bundled("kraft_grid")
        m = inst.monoid()
        closed = m_closure(inst.data, m)
        return inst, closed, decide_commutative(inst.data, m)

    (inst, closed, v), secs = timed(run)
    u = inst.universe
    chain = examples.kraft_chain()
    linked = all(chain[i][1] == chain[i - 1][0] for i in range(len(chain)))
    returns = chain[0][1] == examples.indicator(1, 4) == chain[-1][0]
    members = [(u.id(examples.grid_label(a)), u.id(examples.grid_label(b))) in closed.strict for a, b in chain]
    ok = linked and returns and all(members) and v.status == Status.NOT_RATIONALIZABLE and secs < KRAFT_SECONDS
    return record(5, "Kraft grid", ok, f"{sum(members)}/4 chain links in the closure, cycle closes {linked and returns}, {v.status.value}, {secs:.2f} s")


# 6. identity monoid


def criterion_6():
    rng = random.Random(6)
    agree = 0
    for _ in range(IDENTITY_INSTANCES):
        inst = examples.random_identity_instance(rng, max_n=IDENTITY_MAX_N)
        m = inst.monoid()
        truth = Status.NOT_RATIONALIZABLE if has_cycle(inst.data, m.size) else Status.RATIONALIZABLE
        got = (
            decide_general(inst.data, m).status,
            decide_commutative(inst.data, m).status,
            sat_oracle.decide(inst.data, m).status,
        )
        agree += all(s == truth for s in got)
    r = rate(agree, IDENTITY_INSTANCES)
    return record(6, "identity monoid", r >= REQUIRED_AGREEMENT, f"{agree}/{IDENTITY_INSTANCES} agree with transitive-closure acyclicity")


# 7. commutative families


def criterion_7():
    rng = random.Random(7)

    def run():
        agree = 0
        for _ in range(COMMUTATIVE_INSTANCES):
            inst = examples.random_commutative_instance(rng, max_n=COMMUTATIVE_MAX_N, max_gens=COMMUTATIVE_MAX_GENS)
            m = inst.monoid()
            assert m.closed and is_commutative(m)
            agree += decide_commutative(inst.data, m).status == sat_oracle.decide(inst.data, m).status
        return agree

    agree, secs = timed(run)
    r = rate(agree, COMMUTATIVE_INSTANCES)
    ok = r >= REQUIRED_AGREEMENT and secs < COMMUTATIVE_BATCH_SECONDS
    return record(7, "commutative engine vs SAT", ok, f"{agree}/{COMMUTATIVE_INSTANCES} agree, {secs:.2f} s")


# 8. general families


@lru_cache(maxsize=None)
def general_batch():
    """(instance, monoid, collapse verdict, SAT status) for the fixed general sample."""
    rng = random.Random(8)
    out = []
    for _ in range(GENERAL_INSTANCES):
        inst = examples.random_general_instance(rng, max_n=GENERAL_MAX_N, max_monoid=GENERAL_MAX_MONOID)
        m = inst.monoid()
        out.append((inst, m, decide_general(inst.data, m, GENERAL_LIMITS), sat_oracle.decide(inst.data, m).status))
    return tuple(out)


def criterion_8():
    batch = general_batch()
    decided = [(v.status, s) for _, _, v, s in batch if v.status != Status.UNKNOWN]
    agree = sum(a == b for a, b in decided)
    unknown = len(batch) - len(decided)
    refuted = sum(a == Status.NOT_RATIONALIZABLE for a, _ in decided)
    ok = rate(agree, len(decided)) >= REQUIRED_AGREEMENT and rate(unknown, len(batch)) <= MAX_UNKNOWN_RATE
    return record(
        8, "collapse engine vs SAT", ok,
        f"{agree}/{len(decided)} decided agree ({refuted} refuted), Unknown {unknown}/{len(batch)} = {rate(unknown, len(batch)):.1%}",
    )


# 9. predictions


def model_intersection(data, monoid):
    en = sat_oracle.enumerate_models(sat_oracle.encode_phi(data, monoid))
    assert en.complete
    n = monoid.size
    prefs = [sat_oracle.decode(mod, n) for mod in en.models]
    off = [(x, y) for x in range(n) for y in range(n) if x != y]
    weak = {p for p in off if all(p in pr.weak for pr in prefs)}
    strict = {p for p in off if all(p in pr.strict for pr in prefs)}
    return weak, strict


def criterion_9():
    rng = random.Random(9)
    agree = tested = via_sat = 0
    while tested < PREDICTION_INSTANCES:
        inst = examples.random_general_instance(rng, max_n=PREDICTION_MAX_N, max_monoid=GENERAL_MAX_MONOID)
        m = inst.monoid()
        if sat_oracle.decide(inst.data, m).status != Status.RATIONALIZABLE:
            continue
        tested += 1
        pred = forced_comparisons(inst.data, m)
        weak, strict = model_intersection(inst.data, m)
        agree += pred.weak == weak and pred.strict == strict
        via_sat += "sat" in pred.source.values()
    ok = rate(agree, tested) >= REQUIRED_AGREEMENT
    return record(9, "forced comparisons", ok, f"{agree}/{tested} equal the model intersection ({via_sat} used the SAT fallback)")


# 10. price checks


def criterion_10():
    rng = random.Random(10)
    agree = 0
    for _ in range(PRICE_DATASETS):
        ds = random_dataset(rng, PRICE_MAX_OBS, PRICE_MAX_DIM)
        agree += (
            quasilinear_check(ds).passed == (min_cycle_sum(quasilinear_weights(ds)) >= 0)
            and translation_check(ds).passed == (min_cycle_sum(translation_weights(ds)) >= 0)
            and homothetic_check(ds).passed == (min_cycle_product(homothetic_factors(ds)) >= 1)
        )
    passes = 0
    for _ in range(MODEL_DATASETS_PER_UTILITY):
        k, L = rng.randint(2, PRICE_MAX_OBS), rng.randint(2, PRICE_MAX_DIM)
        passes += bool(quasilinear_check(quasilinear_data(rng, k, L)))
        passes += bool(homothetic_check(cobb_douglas_data(rng, k, L)))
        passes += bool(translation_check(translation_data(rng, k, L)))
    total = 3 * MODEL_DATASETS_PER_UTILITY
    ok = rate(agree, PRICE_DATASETS) >= REQUIRED_AGREEMENT and passes == total
    return record(10, "price checks", ok, f"{agree}/{PRICE_DATASETS} random datasets match the cycle oracles, {passes}/{total} model datasets pass")


# 11. derivation checking


def emitted_refutations():
    out = []
    for name in ("stationarity", "ellsberg", "prepend_streams", "commuting_reformulation"):
        inst = examples.load_bundled(name)
        m = inst.monoid()
        out.append((inst.data, m, decide_general(inst.data, m).derivation))
    for inst, m, v, _ in general_batch():
        if v.status == Status.NOT_RATIONALIZABLE:
            out.append((inst.data, m, v.derivation))
    return out


def _with_step(d, i, step):
    steps = list(d.steps)
    steps[i] = step
    return Derivation(tuple(steps))


def _outside(pairs, n):
    return next(((x, y) for x in range(n) for y in range(n) if (x, y) not in pairs), None)


def mutate(rng, d, monoid):
    """One single-step change that makes the derivation invalid, with the step index the
    checker must report, or None when the drawn kind does not apply."""
    n = monoid.size
    axioms = [i for i, s in enumerate(d.steps) if isinstance(s, AxiomStep)]
    collapses = [i for i, s in enumerate(d.steps) if isinstance(s, CollapseStep)]
    kind = rng.choice(
        ["result", "parent", "transform", "cancelled", "domain", "strict_flag", "link_transform", "gap_set", "s_outside_w", "drop_last"]
    )
    if kind == "drop_last":
        return kind, Derivation(d.steps[:-1]), len(d) - 2
    if kind in ("result", "parent", "transform", "cancelled", "domain"):
        if not collapses:
            return None
        i = rng.choice(collapses)
        s = d.steps[i]
        if kind == "result":
            extra = _outside(s.result.weak, n)
            if extra is None:
                return None
            new = replace(s, result=OrderPair(s.result.weak | {extra}, s.result.strict))
        elif kind == "parent":
            new = replace(s, **{rng.choice(["left", "right"]): rng.randint(i, len(d) + 2)})
        elif kind == "transform":
            new = replace(s, **{rng.choice(["outer", "inner"]): len(monoid) + rng.randrange(3)})
        elif kind == "cancelled":
            new = replace(s, cancelled=(n + rng.randrange(3), s.cancelled[1]))
        else:
            t = monoid[s.outer].table
            holes = [x for x in range(n) if t[x] < 0]
            if not holes:
                return None
            new = replace(s, cancelled=(rng.choice(holes), s.cancelled[1]))
        return kind, _with_step(d, i, new), i
    i = rng.choice(axioms)
    s = d.steps[i]
    c = s.cycle
    if kind == "strict_flag":
        new = replace(s, cycle=BrokenCycle(c.links, not c.strict))
    elif kind == "link_transform":
        j = rng.randrange(len(c.links))
        links = list(c.links)
        links[j] = Link(len(monoid) + rng.randrange(3), links[j].x, links[j].y)
        new = replace(s, cycle=BrokenCycle(tuple(links), c.strict))
    elif kind == "gap_set":
        extra = _outside(s.result.weak, n)
        if extra is None:
            return None
        new = replace(s, result=OrderPair(s.result.weak | {extra}, s.result.strict))
    else:
        extra = _outside(s.result.weak, n)
        if extra is None:
            return None
        new = replace(s, result=OrderPair(s.result.weak, s.result.strict | {extra}))
    return kind, _with_step(d, i, new), i


def criterion_11():
    refs = emitted_refutations()
    valid = sum(bool(check_derivation(d, data, m)) for data, m, d in refs)
    rng = random.Random(11)
    rejected = located = done = 0
    kinds = set()
    while done < MUTATIONS:
        data, m, d = rng.choice(refs)
        got = mutate(rng, d, m)
        if got is None:
            continue
        kind, bad, index = got
        res = check_derivation(bad, data, m)
        done += 1
        kinds.add(kind)
        rejected += not res.ok
        located += res.bad_step == index
    ok = valid == len(refs) and rate(rejected, MUTATIONS) >= REQUIRED_AGREEMENT and located == MUTATIONS
    return record(
        11, "derivation checking", ok,
        f"{valid}/{len(refs)} emitted refutations valid, {rejected}/{MUTATIONS} mutations rejected "
        f"({located} at the mutated step, {len(kinds)} kinds)",
    )


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


def test_01_stationarity_refutation():
    assert criterion_1()


def test_02_knock_on_prediction():
    assert criterion_2()


def test_03_commuting_reformulation():
    assert criterion_3()


def test_04_ellsberg():
    assert criterion_4()


def test_05_kraft_grid():
    assert criterion_5()


def test_06_identity_monoid():
    assert criterion_6()


def test_07_commutative_engine_vs_sat():
    assert criterion_7()


def test_08_collapse_engine_vs_sat():
    assert criterion_8()


def test_09_forced_comparisons():
    assert criterion_9()


def test_10_price_checks():
    assert criterion_10()


def test_11_derivation_checking():
    assert criterion_11()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
