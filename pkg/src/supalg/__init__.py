"""Finite universal algebra with relations, ideals and filters of relations."""

__version__ = "0.1.0"

from .algebra import (DayTermSequence, FiniteAlgebra, IntLineAlgebra, derive_day_from_maltsev, eval_term,
                      integer_group, key_lemma_check, load_algebra, parse_term, verify_day, verify_maltsev)
from .base import SCHEMA, Verdict
from .fixtures import load_fixture, resolve_algebra
from .kernels import BACKEND
from .lattice import Lattice, check_distributive, check_modular, congruence_lattice, congruences
from .relations import INTLINE, Carrier, IntRelation, Relation
from .superequiv import RelIdeal, SuperEquivalence, Xi, ig, ig_circ, seg, supeqv_lattice
from .uniform import RelFilter, SuperUniformity, fg, supunif_lattice, z_map

__all__ = [
    "BACKEND", "SCHEMA", "Carrier", "DayTermSequence", "FiniteAlgebra", "INTLINE", "IntLineAlgebra",
    "IntRelation", "Lattice", "RelFilter", "RelIdeal", "Relation", "SuperEquivalence", "SuperUniformity",
    "Verdict", "Xi", "check_distributive", "check_modular", "congruence_lattice", "congruences",
    "derive_day_from_maltsev", "eval_term", "fg", "ig", "ig_circ", "integer_group", "key_lemma_check",
    "load_algebra", "load_fixture", "parse_term", "resolve_algebra", "seg", "supeqv_lattice",
    "supunif_lattice", "verify_day", "verify_maltsev", "z_map",
]
