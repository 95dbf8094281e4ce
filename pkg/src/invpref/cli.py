"""Command line front end.

Exit codes: 0 rationalizable (or price test passed), 1 not rationalizable
(or failed), 2 unknown, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from . import examples, predictions, price, sat_oracle
from .closure import NotApplicable, decide_commutative, is_commutative
from .core import InvalidId, Monoid, Preference, Status, Universe, Verdict
from .instance import Instance, ParseError, parse_document, parse_instance, serialize_instance
from .refutation import CollapseStep, Limits, check_derivation, decide_general

EXIT_USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def load(source: str) -> tuple[str, Instance]:
    """A path to a JSON instance, or the name of a bundled example."""
    path = Path(source)
    if path.exists():
        return path.stem, parse_instance(path)
    name = path.stem
    if name in examples.BUILDERS:
        return name, parse_document(json.loads(examples.bundled_text(name)))
    raise UsageError(f"no such instance file or bundled example: {source}")


def parse_limits(text: Optional[str], inst: Instance) -> Limits:
    base = inst.options.limits()
    if not text:
        return base
    fields = {}
    for item in text.split(","):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in {"max_links", "max_clauses", "max_width", "cycle_budget", "witness_budget", "probe_budget"}:
            raise UsageError(f"unknown limit {key!r}")
        try:
            v = int(value)
        except ValueError:
            raise UsageError(f"limit {key} needs an integer value") from None
        if v < 0 or (v == 0 and not key.endswith("_budget")):
            raise UsageError(f"limit {key} must be positive")
        fields[key] = v
    return replace(base, **fields)


def _pairs(universe: Universe, pairs) -> list[list[str]]:
    return [list(universe.pair_label(p)) for p in sorted(pairs)]


def _describe(name: str, inst: Instance, monoid: Monoid) -> str:
    state = "closed" if monoid.closed else f"truncated at {monoid.cap}"

    def count(k: int, noun: str) -> str:
        return f"{k} {noun}" + ("" if k == 1 else "s")

    return (
        f"instance: {name} ({count(len(inst.universe), 'alternative')}, {count(len(inst.generators), 'generator')}, "
        f"monoid {count(len(monoid), 'element')}, {state})"
    )


SATURATION_MAX_ALTERNATIVES = 64


def run_engines(inst: Instance, monoid: Monoid, mode: str, limits: Limits) -> tuple[Verdict, list[str]]:
    """``auto`` uses the commutative test when every transform is total, and for
    partial commuting families only when the universe is too big to saturate."""
    notes: list[str] = []
    if mode == "sat":
        try:
            return sat_oracle.decide(inst.data, monoid), notes
        except sat_oracle.TooLarge as e:
            raise UsageError(str(e)) from None
    large = len(inst.universe) > SATURATION_MAX_ALTERNATIVES
    if mode == "auto" and monoid.closed and (monoid.all_total or large) and is_commutative(monoid):
        try:
            return decide_commutative(inst.data, monoid), notes
        except NotApplicable as e:
            notes.append(f"commutative test not conclusive: {e}")
    if large:
        return Verdict(Status.UNKNOWN, "none", reason="universe too large for saturation"), notes
    return decide_general(inst.data, monoid, limits), notes


def format_preference(pref: Preference, universe: Universe) -> str:
    """Indifference classes from best to worst."""
    n = pref.n
    score = {x: sum((x, y) in pref.weak for y in range(n)) for x in range(n)}
    classes: dict[int, list[str]] = {}
    for x in range(n):
        classes.setdefault(score[x], []).append(universe.label(x))
    return " ≻ ".join(" ∼ ".join(c) for _, c in sorted(classes.items(), reverse=True))


def verdict_lines(v: Verdict, inst: Instance, monoid: Monoid) -> list[str]:
    u = inst.universe
    lines = [f"engine: {v.engine}", f"verdict: {v.status.value}"]
    if v.cycle is not None:
        lines.append(f"cycle: {v.cycle.format(u)}")
    if v.derivation is not None:
        last = v.derivation.steps[-1]
        lines.append(f"derivation: {len(v.derivation)} steps")
        if isinstance(last, CollapseStep):
            left = v.derivation.steps[last.left].result
            right = v.derivation.steps[last.right].result
            lines.append(f"collapsed: {left.format(u)} and {right.format(u)} give ⟨∅, ∅⟩")
    if v.reason:
        lines.append(f"reason: {v.reason}")
    return lines


def write_dimacs(path: str, inst: Instance, monoid: Monoid) -> None:
    try:
        cnf = sat_oracle.encode_phi(inst.data, monoid)
    except sat_oracle.TooLarge as e:
        raise UsageError(f"cannot write DIMACS: {e}") from None
    Path(path).write_text(sat_oracle.to_dimacs(cnf))


def cmd_check(args, out) -> int:
    name, inst = load(args.instance)
    monoid = inst.monoid()
    limits = parse_limits(args.limits, inst)
    if args.dimacs_out:
        write_dimacs(args.dimacs_out, inst, monoid)
    verdict, notes = run_engines(inst, monoid, args.mode, limits)
    lines = [_describe(name, inst, monoid)] + notes + verdict_lines(verdict, inst, monoid)
    final = verdict.status
    if args.oracle:
        try:
            oracle = sat_oracle.decide(inst.data, monoid)
        except sat_oracle.TooLarge as e:
            lines.append(f"oracle: skipped ({e})")
            print("\n".join(lines), file=out)
            return final.exit_code
        if verdict.status == Status.UNKNOWN:
            lines.append(f"oracle: sat says {oracle.status.value}")
            final = oracle.status
        elif oracle.status == verdict.status:
            lines.append(f"oracle: sat agrees ({oracle.status.value})")
        else:
            lines.append(f"oracle: sat DISAGREES ({oracle.status.value})")
            print("\n".join(lines), file=out)
            return EXIT_USAGE
    print("\n".join(lines), file=out)
    return final.exit_code


def cmd_predict(args, out) -> int:
    name, inst = load(args.instance)
    monoid = inst.monoid()
    limits = parse_limits(args.limits, inst)
    u = inst.universe
    try:
        if args.mode == "sat":
            pred = predictions.forced_by_sat(inst.data, monoid)
        else:
            pred = predictions.forced_comparisons(inst.data, monoid, limits)
    except predictions.NotRationalizable as e:
        print(json.dumps({"instance": name, "error": str(e)}, ensure_ascii=False), file=out)
        return Status.NOT_RATIONALIZABLE.exit_code
    doc = {
        "instance": name,
        "weak": _pairs(u, pred.weak),
        "strict": _pairs(u, pred.strict),
        "source": [
            {"pair": list(u.pair_label((x, y))), "relation": rel, "source": src}
            for (x, y, rel), src in sorted(pred.source.items())
        ],
    }
    print(json.dumps(doc, ensure_ascii=False, indent=1), file=out)
    return Status.RATIONALIZABLE.exit_code


def cmd_explain(args, out) -> int:
    name, inst = load(args.instance)
    monoid = inst.monoid()
    limits = parse_limits(args.limits, inst)
    u = inst.universe
    if args.dimacs_out:
        write_dimacs(args.dimacs_out, inst, monoid)
    verdict, notes = run_engines(inst, monoid, args.mode, limits)
    lines = [_describe(name, inst, monoid)] + notes + [f"engine: {verdict.engine}", f"verdict: {verdict.status.value}"]
    if verdict.derivation is not None:
        lines.append(verdict.derivation.format(u, monoid))
        check = check_derivation(verdict.derivation, inst.data, monoid)
        lines.append("check: ok" if check else f"check: FAILED at step {check.bad_step}: {check.message}")
        if not check:
            print("\n".join(lines), file=out)
            return EXIT_USAGE
    elif verdict.cycle is not None:
        from .closure import m_closure

        ok = verdict.cycle.verify(m_closure(inst.data, monoid))
        lines.append(f"cycle: {verdict.cycle.format(u)}")
        lines.append("check: ok" if ok else "check: FAILED")
        if not ok:
            print("\n".join(lines), file=out)
            return EXIT_USAGE
    elif verdict.status == Status.RATIONALIZABLE:
        pref = verdict.preference or sat_oracle.decide(inst.data, monoid).preference
        lines.append(f"rationalization: {format_preference(pref, u)}")
    elif verdict.reason:
        lines.append(f"reason: {verdict.reason}")
    print("\n".join(lines), file=out)
    return verdict.status.exit_code


def cmd_price(args, out) -> int:
    try:
        text = Path(args.csv).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"{args.csv}: {e.strerror}") from None
    try:
        ds = price.read_csv(text)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.test == "garp":
        cycle, universe = price.garp_check(ds)
        if cycle is None:
            print("garp: pass", file=out)
            return 0
        print(f"garp: fail\ncycle: {cycle.format(universe)}", file=out)
        return 1
    check = {"quasilinear": price.quasilinear_check, "homothetic": price.homothetic_check,
             "translation": price.translation_check}[args.test]
    try:
        res = check(ds)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if res.passed:
        print(f"{args.test}: pass", file=out)
        return 0
    label = "product" if args.test == "homothetic" else "sum"
    cyc = " → ".join(str(i + 1) for i in res.cycle + res.cycle[:1])
    print(f"{args.test}: fail\ncycle (observations): {cyc}\n{label}: {res.value}", file=out)
    return 1


def cmd_random(args, out) -> int:
    inst = examples.random_instance(args.seed, args.kind)
    print(serialize_instance(inst), file=out)
    return 0


def cmd_examples(args, out) -> int:
    if args.name:
        if args.name not in examples.BUILDERS:
            raise UsageError(f"no bundled example {args.name!r}")
        out.write(examples.bundled_text(args.name))
    else:
        print("\n".join(examples.bundled_names()), file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="invpref", description="Test choice data for invariant rationalizability.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def instance_command(name: str, help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("instance", help="instance JSON path or bundled example name")
        sp.add_argument("--mode", choices=["auto", "collapse", "sat"], default="auto")
        sp.add_argument("--limits", help="comma separated key=value, e.g. max_width=4,max_clauses=50000")
        return sp

    c = instance_command("check", "decide rationalizability")
    c.add_argument("--oracle", action="store_true", help="cross-check with the SAT oracle")
    c.add_argument("--dimacs-out", metavar="FILE", help="write the CNF encoding in DIMACS format")
    c.set_defaults(func=cmd_check)

    pr = instance_command("predict", "comparisons forced in every rationalization")
    pr.set_defaults(func=cmd_predict)

    e = instance_command("explain", "print the refutation, cycle or a rationalization")
    e.add_argument("--dimacs-out", metavar="FILE")
    e.set_defaults(func=cmd_explain)

    pc = sub.add_parser("price", help="closed-form tests on price/quantity CSV data")
    pc.add_argument("test", choices=["quasilinear", "homothetic", "translation", "garp"])
    pc.add_argument("csv")
    pc.set_defaults(func=cmd_price)

    r = sub.add_parser("random", help="print a random instance")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--kind", choices=["general", "identity", "commutative"], default="general")
    r.set_defaults(func=cmd_random)

    ex = sub.add_parser("examples", help="list bundled examples or print one")
    ex.add_argument("name", nargs="?")
    ex.set_defaults(func=cmd_examples)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, ParseError, InvalidId) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
