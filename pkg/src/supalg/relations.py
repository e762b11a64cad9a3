"""Binary relations on a finite carrier or on the integer line.

Finite relations are rows of bit masks.  Relations on the integers keep a finite
set of explicit pairs plus a flag saying whether the whole diagonal is included;
``opposite`` is the only name used for what is also written R^-1.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from . import kernels
from .algebra import FiniteAlgebra, IntLineAlgebra, as_term, eval_term, term_arity, term_table
from .base import ArityError, CarrierMismatch, InfiniteSupportError, ParseError, Verdict


@dataclass(frozen=True)
class Carrier:
    kind: str  # "finite" or "intline"
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("finite", "intline"):
            raise ValueError(f"unknown carrier kind {self.kind!r}")
        if self.n < 0:
            raise ValueError("carrier size must be nonnegative")

    @classmethod
    def finite(cls, n):
        return cls("finite", n)

    def to_json(self):
        return {"finite": self.n} if self.kind == "finite" else "intline"

    def __str__(self):
        return f"Fin({self.n})" if self.kind == "finite" else "Z"


INTLINE = Carrier("intline")


def _popcount(x):
    return bin(x).count("1")


class Relation:
    """A relation on {0..n-1} stored as n row masks."""

    __slots__ = ("n", "rows", "_hash")

    def __init__(self, n, rows):
        rows = tuple(rows)
        if len(rows) != n:
            raise ValueError(f"expected {n} rows, got {len(rows)}")
        limit = 1 << n
        if any(r < 0 or r >= limit for r in rows):
            raise ValueError("row mask outside the carrier")
        self.n = n
        self.rows = rows
        self._hash = hash((n, rows))

    # construction
    @classmethod
    def from_pairs(cls, n, pairs):
        rows = [0] * n
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"pair {(a, b)} outside Fin({n})")
            rows[a] |= 1 << b
        return cls(n, rows)

    @classmethod
    def delta(cls, n):
        return cls(n, [1 << a for a in range(n)])

    @classmethod
    def full(cls, n):
        return cls(n, [(1 << n) - 1] * n)

    @classmethod
    def empty(cls, n):
        return cls(n, [0] * n)

    @classmethod
    def from_code(cls, n, code):
        mask = (1 << n) - 1
        return cls(n, [(code >> (a * n)) & mask for a in range(n)])

    @classmethod
    def from_matrix(cls, M):
        M = np.asarray(M, dtype=bool)
        n = M.shape[0]
        return cls(n, [int(sum(1 << b for b in np.flatnonzero(M[a]))) for a in range(n)])

    @classmethod
    def from_partition(cls, n, blocks):
        rows = [0] * n
        for block in blocks:
            mask = sum(1 << b for b in block)
            for a in block:
                rows[a] = mask
        return cls(n, rows)

    # inspection
    @property
    def carrier(self):
        return Carrier.finite(self.n)

    @property
    def code(self):
        return sum(r << (a * self.n) for a, r in enumerate(self.rows))

    def pairs(self):
        out = []
        for a, row in enumerate(self.rows):
            b = 0
            while row:
                if row & 1:
                    out.append((a, b))
                row >>= 1
                b += 1
        return out

    def __len__(self):
        return sum(_popcount(r) for r in self.rows)

    def __contains__(self, pair):
        a, b = pair
        return bool((self.rows[a] >> b) & 1)

    def matrix(self):
        M = np.zeros((self.n, self.n), dtype=bool)
        for a, b in self.pairs():
            M[a, b] = True
        return M

    def key(self):
        """Canonical sort key: size first, then the sorted pair list."""
        return (len(self), self.pairs())

    def __eq__(self, other):
        return isinstance(other, Relation) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Relation({self.n}, {self.pairs()})"

    def _check(self, other):
        if not isinstance(other, Relation) or other.n != self.n:
            raise CarrierMismatch(f"relations on different carriers: {self.carrier} vs "
                                  f"{getattr(other, 'carrier', other)}")

    # lattice operations
    def __or__(self, other):
        self._check(other)
        return Relation(self.n, [a | b for a, b in zip(self.rows, other.rows)])

    def __and__(self, other):
        self._check(other)
        return Relation(self.n, [a & b for a, b in zip(self.rows, other.rows)])

    def __le__(self, other):
        self._check(other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def __lt__(self, other):
        return self <= other and self != other

    def __ge__(self, other):
        return other <= self

    # relational operations
    def compose(self, other):
        self._check(other)
        return Relation(self.n, kernels.compose_rows(list(self.rows), list(other.rows)))

    def opposite(self):
        rows = [0] * self.n
        for a, b in self.pairs():
            rows[b] |= 1 << a
        return Relation(self.n, rows)

    def power(self, k):
        if k < 1:
            raise ValueError("power needs k >= 1")
        out = self
        for _ in range(k - 1):
            out = out.compose(self)
        return out

    def transitive_closure(self):
        return Relation(self.n, kernels.transitive_closure_rows(list(self.rows)))

    def refl_sym_closure(self):
        return self | self.opposite() | Relation.delta(self.n)

    def equivalence_closure(self):
        return self.refl_sym_closure().transitive_closure()

    def is_reflexive(self):
        return all((row >> a) & 1 for a, row in enumerate(self.rows))

    def is_symmetric(self):
        return self == self.opposite()

    def is_transitive(self):
        return self.compose(self) <= self

    def is_equivalence(self):
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()

    def blocks(self):
        """Classes of an equivalence relation, each as a sorted tuple."""
        seen, out = 0, []
        for a, row in enumerate(self.rows):
            if not (seen >> a) & 1:
                out.append(tuple(b for b in range(self.n) if (row >> b) & 1))
                seen |= row
        return out

    def to_json(self):
        return {"carrier": {"finite": self.n}, "pairs": [list(p) for p in self.pairs()], "diagonal": False}


class IntRelation:
    """A relation on the integers: finitely many explicit pairs, plus all of Δ if ``diagonal``.

    Pairs (a, a) may be stored only while the diagonal flag is off.
    """

    __slots__ = ("pairs_", "diagonal", "_hash")

    def __init__(self, pairs=(), diagonal=False):
        pairs = frozenset((int(a), int(b)) for a, b in pairs)
        if diagonal:
            pairs = frozenset(p for p in pairs if p[0] != p[1])
        self.pairs_ = pairs
        self.diagonal = bool(diagonal)
        self._hash = hash((pairs, self.diagonal))

    carrier = INTLINE

    @classmethod
    def delta(cls):
        return cls((), True)

    def pairs(self):
        return sorted(self.pairs_)

    def support(self):
        return {x for p in self.pairs_ for x in p}

    def off_diagonal(self):
        return sorted(p for p in self.pairs_ if p[0] != p[1])

    def __contains__(self, pair):
        a, b = pair
        return (self.diagonal and a == b) or (a, b) in self.pairs_

    def __eq__(self, other):
        return isinstance(other, IntRelation) and self.pairs_ == other.pairs_ and self.diagonal == other.diagonal

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"IntRelation({self.pairs()}, diagonal={self.diagonal})"

    def key(self):
        return (len(self.pairs_), self.pairs(), self.diagonal)

    @staticmethod
    def _check(other):
        if not isinstance(other, IntRelation):
            raise CarrierMismatch("integer-line relation combined with a finite one")

    def __or__(self, other):
        self._check(other)
        return IntRelation(self.pairs_ | other.pairs_, self.diagonal or other.diagonal)

    def __and__(self, other):
        self._check(other)
        keep = [p for p in self.pairs_ if p in other] + [p for p in other.pairs_ if p in self]
        return IntRelation(keep, self.diagonal and other.diagonal)

    def __le__(self, other):
        self._check(other)
        if self.diagonal and not other.diagonal:
            return False
        return all(p in other for p in self.pairs_)

    def __ge__(self, other):
        return other <= self

    def compose(self, other):
        # (P u dR.D) o (Q u dS.D) = PoQ u dS.P u dR.Q u (dR and dS).D
        self._check(other)
        by_src = {}
        for b, c in other.pairs_:
            by_src.setdefault(b, []).append(c)
        out = set()
        for a, b in self.pairs_:
            for c in by_src.get(b, ()):
                out.add((a, c))
        if other.diagonal:
            out |= self.pairs_
        if self.diagonal:
            out |= other.pairs_
        return IntRelation(out, self.diagonal and other.diagonal)

    def opposite(self):
        return IntRelation(((b, a) for a, b in self.pairs_), self.diagonal)

    def power(self, k):
        if k < 1:
            raise ValueError("power needs k >= 1")
        out = self
        for _ in range(k - 1):
            out = out.compose(self)
        return out

    def refl_sym_closure(self):
        return IntRelation(self.pairs_ | {(b, a) for a, b in self.pairs_}, True)

    def is_reflexive(self):
        return self.diagonal

    def is_symmetric(self):
        return self == self.opposite()

    def is_transitive(self):
        return self.compose(self) <= self

    def is_equivalence(self):
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()

    def to_json(self):
        return {"carrier": "intline", "pairs": [list(p) for p in self.pairs()], "diagonal": self.diagonal}


def relation_from_json(data):
    try:
        carrier = data["carrier"]
        pairs = [tuple(p) for p in data.get("pairs", [])]
        diagonal = bool(data.get("diagonal", False))
        if carrier == "intline":
            return IntRelation(pairs, diagonal)
        n = int(carrier["finite"])
        R = Relation.from_pairs(n, pairs)
        return R | Relation.delta(n) if diagonal else R
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed relation JSON: {exc}") from exc


def delta(carrier):
    return IntRelation.delta() if carrier.kind == "intline" else Relation.delta(carrier.n)


def all_relations(n):
    for code in range(1 << (n * n)):
        yield Relation.from_code(n, code)


def random_relation(n, rng, density=0.5):
    return Relation.from_matrix(rng.random((n, n)) < density)


def random_tolerance_seed(n, rng, density=0.3):
    """A random reflexive symmetric relation."""
    return random_relation(n, rng, density).refl_sym_closure()


# ---------------------------------------------------------------- operations on relations

def apply_op_to_relations(alg, op, rels, arity=None):
    """{(w(a), w(b)) : (a_j, b_j) in R_j} for a basic symbol or a term ``op``."""
    if isinstance(alg, IntLineAlgebra):
        return _apply_intline(alg, op, rels)
    if isinstance(op, str) and op in alg.ops:
        k, flat = alg.arity(op), alg.flat_table(op)
    else:
        t = as_term(op)
        k = term_arity(t) if arity is None else arity
        flat = term_table(alg, t, k).reshape(-1)
    if len(rels) != k:
        raise ArityError(f"operation of arity {k} applied to {len(rels)} relations")
    for R in rels:
        if not isinstance(R, Relation) or R.n != alg.size:
            raise CarrierMismatch(f"relation carrier does not match {alg.name}")
    rows = kernels.apply_op_rows(flat, alg.size, k, [list(R.rows) for R in rels])
    return Relation(alg.size, rows)


# Consecutive probe values: a nonconstant integer polynomial of degree <= 6 is
# not constant on seven consecutive integers.
_PROBES = range(-3, 4)


def _apply_intline(alg, op, rels):
    if isinstance(op, str) and op in alg.ops:
        k = alg.arity(op)

        def f(*xs):
            return alg.apply(op, *xs)
        surjective = op in alg.surjective
    else:
        t = as_term(op)
        k = term_arity(t)

        def f(*xs):
            return eval_term(alg, t, xs)
        surjective = False
    if len(rels) != k:
        raise ArityError(f"operation of arity {k} applied to {len(rels)} relations")
    for R in rels:
        IntRelation._check(R)
    if k == 0:
        c = f()
        return IntRelation([(c, c)])
    out = set()
    diagonal = False
    # Each argument contributes either one of its stored pairs or a diagonal
    # pair (c, c) with c free.
    choices = [[("pair", p) for p in R.pairs()] + ([("diag", None)] if R.diagonal else []) for R in rels]
    for combo in itertools.product(*choices):
        free = [j for j, (kind, _) in enumerate(combo) if kind == "diag"]
        if not free:
            a = [p[0] for _, p in combo]
            b = [p[1] for _, p in combo]
            out.add((f(*a), f(*b)))
            continue
        seen = set()
        for cs in itertools.product(_PROBES, repeat=len(free)):
            a, b = [], []
            it = iter(cs)
            for kind, p in combo:
                if kind == "diag":
                    c = next(it)
                    a.append(c)
                    b.append(c)
                else:
                    a.append(p[0])
                    b.append(p[1])
            seen.add((f(*a), f(*b)))
        if len(seen) == 1:
            out |= seen
        elif all(u == v for u, v in seen):
            if not surjective:
                raise InfiniteSupportError("diagonal image of a non-surjective operation is not representable")
            diagonal = True
        else:
            off = sorted(p for p in seen if p[0] != p[1])
            raise InfiniteSupportError(
                f"diagonal argument combined with explicit pairs yields unboundedly many translates, e.g. {off[:3]}")
    return IntRelation(out, diagonal)


def compatibility_witness(alg, R):
    """First (op, image pair, argument pairs) with the image pair outside R, or None."""
    for sym, k in alg.ops.items():
        image = apply_op_to_relations(alg, sym, [R] * k)
        extra = image & Relation(R.n, [~r & ((1 << R.n) - 1) for r in R.rows])
        if len(extra):
            u, v = extra.pairs()[0]
            for args in itertools.product(R.pairs(), repeat=k):
                if alg.apply(sym, *(p[0] for p in args)) == u and alg.apply(sym, *(p[1] for p in args)) == v:
                    assert (u, v) not in R
                    return {"op": sym, "pair": (u, v), "args": args}
            raise AssertionError("compatibility witness failed re-validation")
    return None


def is_compatible_relation(alg: FiniteAlgebra, R) -> Verdict:
    if R.n != alg.size:
        raise CarrierMismatch(f"relation on Fin({R.n}) but {alg.name} has {alg.size} elements")
    w = compatibility_witness(alg, R)
    if w is None:
        return Verdict(True)
    return Verdict(False, witness=w, detail=f"{w['op']} maps R-related arguments to {w['pair']} outside R")


def is_congruence(alg, R):
    return R.n == alg.size and R.is_equivalence() and compatibility_witness(alg, R) is None


def relation_props(R, alg=None):
    props = {
        "reflexive": R.is_reflexive(),
        "symmetric": R.is_symmetric(),
        "transitive": R.is_transitive(),
    }
    props["equivalence"] = all(props.values())
    if alg is not None:
        props["tolerance_wrt"] = props["reflexive"] and props["symmetric"] and bool(is_compatible_relation(alg, R))
    return props


def m_of_relation(alg, m, R):
    """The union over i of m_i(R, R, R, R)."""
    out = None
    for t in m:
        piece = apply_op_to_relations(alg, t, [R] * 4, arity=4)
        out = piece if out is None else out | piece
    return out


def image_along(f, R, target_n):
    f = list(f)
    if len(f) != R.n:
        raise CarrierMismatch("map domain does not match the relation carrier")
    if any(not 0 <= y < target_n for y in f):
        raise CarrierMismatch("map values outside the codomain")
    return Relation.from_pairs(target_n, [(f[a], f[b]) for a, b in R.pairs()])


def preimage_along(f, R):
    f = list(f)
    if any(not 0 <= y < R.n for y in f):
        raise CarrierMismatch("map values outside the relation carrier")
    n = len(f)
    rows = [0] * n
    for a in range(n):
        target = R.rows[f[a]]
        rows[a] = sum(1 << b for b in range(n) if (target >> f[b]) & 1)
    return Relation(n, rows)


def product_relation(R, S):
    """R x S on the product carrier, pair (a, b) encoded as a * |S| + b."""
    m = S.n
    pairs = [(a * m + c, b * m + d) for a, b in R.pairs() for c, d in S.pairs()]
    return Relation.from_pairs(R.n * m, pairs)
