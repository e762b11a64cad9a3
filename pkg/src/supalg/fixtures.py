"""Bundled example algebras and their Day terms.

The JSON files under ``data/`` are produced by ``write_bundled`` from the
constructors below; ``load_fixture`` reads them back.
"""

import itertools
import json
from importlib import resources
from pathlib import Path

from .algebra import DayTermSequence, FiniteAlgebra, derive_day_from_maltsev, load_algebra, parse_term

MALTSEV_GROUP = "(+ (+ x0 (- x1)) x2)"
MALTSEV_XOR = "(^ x0 (^ x1 x2))"
MAJORITY = "(join (join (meet x0 x1) (meet x1 x2)) (meet x0 x2))"


def _table(n, arity, f):
    return [f(*args) % n if n else 0 for args in itertools.product(range(n), repeat=arity)]


def cyclic_group(n):
    return FiniteAlgebra(f"Z{n}", n, {
        "+": (2, _table(n, 2, lambda a, b: a + b)),
        "-": (1, _table(n, 1, lambda a: -a)),
        "0": (0, [0]),
    })


def cyclic_ring(n):
    return cyclic_group(n).extended(f"Z{n} ring", {
        "*": (2, _table(n, 2, lambda a, b: a * b)),
        "1": (0, [1 % n]),
    })


def klein_group():
    return FiniteAlgebra("Z2xZ2", 4, {
        "+": (2, [a ^ b for a in range(4) for b in range(4)]),
        "-": (1, list(range(4))),
        "0": (0, [0]),
    })


def two_element_lattice():
    return FiniteAlgebra("lattice2", 2, {
        "meet": (2, [a & b for a in range(2) for b in range(2)]),
        "join": (2, [a | b for a in range(2) for b in range(2)]),
    })


def bare_set(n):
    return FiniteAlgebra(f"set{n}", n, {})


def two_group_structures():
    """Addition mod 4 together with the Klein group operation on the same four points."""
    g = cyclic_group(4)
    return g.extended("two groups on 4", {
        "^": (2, [a ^ b for a in range(4) for b in range(4)]),
        "~": (1, list(range(4))),
        "e": (0, [0]),
    })


def lattice_day_terms():
    """x, M(x, y, w), M(x, z, w), w with M the majority term (d = 3)."""
    M = parse_term(MAJORITY)
    from .algebra import Var, substitute
    x, y, z, w = (Var(i) for i in range(4))
    return DayTermSequence((x, substitute(M, (x, y, w)), substitute(M, (x, z, w)), w))


def _registry():
    reg = {}
    for n in range(2, 9):
        reg[f"z{n}"] = (lambda n=n: cyclic_group(n), MALTSEV_GROUP)
    reg["z12"] = (lambda: cyclic_group(12), MALTSEV_GROUP)
    reg["z4ring"] = (lambda: cyclic_ring(4), MALTSEV_GROUP)
    reg["z6ring"] = (lambda: cyclic_ring(6), MALTSEV_GROUP)
    reg["z2xz2"] = (klein_group, MALTSEV_GROUP)
    reg["lattice2"] = (two_element_lattice, None)
    reg["twogroups4"] = (two_group_structures, MALTSEV_GROUP)
    for n in range(0, 6):
        reg[f"set{n}"] = (lambda n=n: bare_set(n), None)
    return reg


REGISTRY = _registry()
NAMES = tuple(REGISTRY)
# Algebras in congruence-modular varieties, small enough for exhaustive checks.
CM_NAMES = tuple(f"z{n}" for n in range(2, 9)) + ("z4ring", "z6ring", "z2xz2", "lattice2", "twogroups4")


def day_terms(name):
    """Day terms for a bundled CM algebra, or None for the bare sets."""
    _, p = REGISTRY[name]
    if name == "lattice2":
        return lattice_day_terms()
    return derive_day_from_maltsev(parse_term(p)) if p else None


def maltsev_term(name):
    p = REGISTRY[name][1]
    return parse_term(p) if p else None


def _data_dir():
    return resources.files("supalg") / "data"


def load_fixture(name) -> FiniteAlgebra:
    if name not in REGISTRY:
        raise KeyError(f"unknown fixture {name!r}; bundled: {', '.join(NAMES)}")
    with resources.as_file(_data_dir() / f"{name}.json") as path:
        return load_algebra(path)


def resolve_algebra(spec) -> FiniteAlgebra:
    """A bundled fixture name or a path to algebra JSON."""
    if spec in REGISTRY:
        return load_fixture(spec)
    return load_algebra(spec)


def write_bundled(target=None):
    target = Path(target) if target else Path(__file__).parent / "data"
    target.mkdir(parents=True, exist_ok=True)
    for name, (make, _) in REGISTRY.items():
        alg = make()
        alg.name = name
        with open(target / f"{name}.json", "w") as fh:
            json.dump(alg.to_json(), fh)
            fh.write("\n")


if __name__ == "__main__":
    write_bundled()
