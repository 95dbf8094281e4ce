"""JSON instance documents: parsing, validation and serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Optional, Union

from .core import (
    DEFAULT_MONOID_CAP,
    Monoid,
    NormalizationReport,
    OrderPair,
    PartialTransform,
    Universe,
    generate_monoid,
    normalize_data,
)
from .refutation import Limits

FORMAT_VERSION = 1


class ParseError(ValueError):
    """Malformed instance document; the message names the offending field."""


class UnknownLabel(ParseError):
    pass


class DuplicateTransformName(ParseError):
    pass


@dataclass(frozen=True)
class Options:
    max_links: Optional[int] = None
    max_clauses: int = 50_000
    max_width: int = 4
    monoid_cap: int = DEFAULT_MONOID_CAP

    def limits(self) -> Limits:
        return Limits(max_links=self.max_links, max_clauses=self.max_clauses, max_width=self.max_width)


@dataclass(frozen=True)
class Instance:
    universe: Universe
    generators: tuple[PartialTransform, ...]
    data: OrderPair
    options: Options = Options()
    report: Optional[NormalizationReport] = field(default=None, compare=False)

    def monoid(self) -> Monoid:
        return generate_monoid(self.generators, self.universe, self.options.monoid_cap)

    def label_pairs(self, pairs) -> list[list[str]]:
        return [list(self.universe.pair_label(p)) for p in sorted(pairs)]


def make_instance(
    alternatives: list[str],
    transforms: dict[str, dict[str, str]],
    weak: list[tuple[str, str]] = (),
    strict: list[tuple[str, str]] = (),
    options: Options = Options(),
) -> Instance:
    """Build and normalize an instance from labels."""
    doc = {
        "format_version": FORMAT_VERSION,
        "alternatives": list(alternatives),
        "transforms": [{"name": k, "map": v} for k, v in transforms.items()],
        "weak": [list(p) for p in weak],
        "strict": [list(p) for p in strict],
    }
    inst = parse_document(doc)
    return replace(inst, options=options)


def _int_option(opts: dict, key: str, default, minimum: int = 1):
    if key not in opts or opts[key] is None:
        return default
    v = opts[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise ParseError(f"options.{key}: expected an integer ≥ {minimum}, got {v!r}")
    return v


def parse_document(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise ParseError("top level: expected a JSON object")
    version = doc.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ParseError(f"format_version: unsupported version {version!r}")
    known = {"format_version", "alternatives", "transforms", "weak", "strict", "options", "name", "description"}
    extra = set(doc) - known
    if extra:
        raise ParseError(f"top level: unknown field(s) {sorted(extra)}")
    alts = doc.get("alternatives")
    if not isinstance(alts, list) or not alts or not all(isinstance(a, str) and a for a in alts):
        raise ParseError("alternatives: expected a non-empty list of non-empty strings")
    try:
        universe = Universe(tuple(alts))
    except ValueError as e:
        raise ParseError(f"alternatives: {e}") from None

    def lookup(label: Any, where: str) -> int:
        if not isinstance(label, str):
            raise ParseError(f"{where}: expected a label string, got {label!r}")
        if label not in universe.index:
            raise UnknownLabel(f"{where}: unknown label {label!r}")
        return universe.index[label]

    transforms = doc.get("transforms", [])
    if not isinstance(transforms, list):
        raise ParseError("transforms: expected a list")
    gens = []
    names = set()
    for i, t in enumerate(transforms):
        if not isinstance(t, dict) or not isinstance(t.get("name"), str) or not t["name"]:
            raise ParseError(f"transforms[{i}]: expected an object with a non-empty name")
        name = t["name"]
        if name in names:
            raise DuplicateTransformName(f"transforms[{i}]: duplicate name {name!r}")
        names.add(name)
        m = t.get("map")
        if not isinstance(m, dict):
            raise ParseError(f"transforms[{i}].map: expected an object label -> label")
        mapping = {
            lookup(k, f"transforms[{i}].map key"): lookup(v, f"transforms[{i}].map[{k!r}]") for k, v in m.items()
        }
        gens.append(PartialTransform.from_map(name, mapping, len(universe)))

    def relation(key: str) -> set[tuple[int, int]]:
        rows = doc.get(key, [])
        if not isinstance(rows, list):
            raise ParseError(f"{key}: expected a list of [a, b] pairs")
        out = set()
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != 2:
                raise ParseError(f"{key}[{i}]: expected a pair [a, b]")
            out.add((lookup(row[0], f"{key}[{i}][0]"), lookup(row[1], f"{key}[{i}][1]")))
        return out

    raw = OrderPair(frozenset(relation("weak")), frozenset(relation("strict")))
    opts = doc.get("options", {}) or {}
    if not isinstance(opts, dict):
        raise ParseError("options: expected an object")
    unknown_opts = set(opts) - {"max_links", "max_clauses", "max_width", "monoid_cap"}
    if unknown_opts:
        raise ParseError(f"options: unknown field(s) {sorted(unknown_opts)}")
    options = Options(
        max_links=_int_option(opts, "max_links", None),
        max_clauses=_int_option(opts, "max_clauses", 50_000),
        max_width=_int_option(opts, "max_width", 4),
        monoid_cap=_int_option(opts, "monoid_cap", DEFAULT_MONOID_CAP),
    )
    data, report = normalize_data(raw, universe)
    return Instance(universe, tuple(gens), data, options, report)


def parse_instance(source: Union[str, Path]) -> Instance:
    """Parse from a path or from JSON text."""
    text: str
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        path = Path(source)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ParseError(f"{path}: {e.strerror}") from None
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    return parse_document(doc)


def to_document(inst: Instance, *, include_reflexive: bool = False) -> dict:
    u = inst.universe
    lab = u.label
    weak = inst.data.weak - inst.data.strict
    if not include_reflexive:
        weak = {p for p in weak if p[0] != p[1]}
    opts = {
        "max_clauses": inst.options.max_clauses,
        "max_width": inst.options.max_width,
        "monoid_cap": inst.options.monoid_cap,
    }
    if inst.options.max_links is not None:
        opts["max_links"] = inst.options.max_links
    return {
        "format_version": FORMAT_VERSION,
        "alternatives": list(u.alternatives),
        "transforms": [
            {"name": g.name, "map": {lab(x): lab(y) for x, y in sorted(g.map.items())}} for g in inst.generators
        ],
        "weak": inst.label_pairs(weak),
        "strict": inst.label_pairs(inst.data.strict),
        "options": opts,
    }


def serialize_instance(inst: Instance) -> str:
    return json.dumps(to_document(inst), ensure_ascii=False, separators=(",", ":"))
