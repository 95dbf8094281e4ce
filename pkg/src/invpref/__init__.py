"""Rationalizability of choice data by preferences invariant under partial transforms."""

from .closure import decide_commutative, find_cycle, is_commutative, m_closure, transitive_closure
from .core import (
    Monoid,
    OrderPair,
    PartialTransform,
    Preference,
    Status,
    Universe,
    Verdict,
    compose,
    generate_monoid,
    normalize_data,
)
from .instance import Instance, parse_instance
from .refutation import Limits, check_derivation, decide_general, saturate

__all__ = [
    "Instance",
    "Limits",
    "Monoid",
    "OrderPair",
    "PartialTransform",
    "Preference",
    "Status",
    "Universe",
    "Verdict",
    "check_derivation",
    "compose",
    "decide_commutative",
    "decide_general",
    "find_cycle",
    "generate_monoid",
    "is_commutative",
    "m_closure",
    "normalize_data",
    "parse_instance",
    "saturate",
    "transitive_closure",
]
