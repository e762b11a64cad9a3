"""Explicit finite lattices, congruence and partition lattices, modular-law scans."""

from dataclasses import dataclass
from typing import Any

import numpy as np

from .algebra import FiniteAlgebra
from .base import SCHEMA, SizeLimitError, Verdict
from .relations import Relation, is_congruence

CON_CAP = 6
EQV_CAP = 5
IDEAL_CAP = 20


def _payload_json(x):
    return x.to_json() if hasattr(x, "to_json") else x


class Lattice:
    """Elements with a validated order; meet and join are derived from ``leq``.

    ``leq[i, j]`` is true iff element i is below element j.
    """

    def __init__(self, elements, leq, name=""):
        self.elements = list(elements)
        self.name = name
        L = np.array(leq, dtype=bool)
        m = len(self.elements)
        if m == 0:
            raise ValueError("a lattice needs at least one element")
        if L.shape != (m, m):
            raise ValueError("order matrix has the wrong shape")
        if not L.diagonal().all():
            raise ValueError("order is not reflexive")
        if (L & L.T & ~np.eye(m, dtype=bool)).any():
            raise ValueError("order is not antisymmetric")
        Li = L.astype(np.int64)
        if ((Li @ Li > 0) & ~L).any():
            raise ValueError("order is not transitive")
        L.setflags(write=False)
        self.leq = L
        self.join = self._bounds(L)
        self.meet = self._bounds(L.T)
        self._validate()

    @staticmethod
    def _bounds(L):
        # The least upper bound of i, j is the common upper bound whose upset is
        # exactly the set of common upper bounds.
        m = L.shape[0]
        up_count = L.sum(1)
        out = np.empty((m, m), dtype=np.int64)
        for i in range(m):
            U = L[i][None, :] & L
            sizes = U.sum(1)
            cand = U & (up_count[None, :] == sizes[:, None])
            if not cand.any(1).all():
                j = int(np.flatnonzero(~cand.any(1))[0])
                raise ValueError(f"elements {i} and {j} have no least bound")
            k = cand.argmax(1)
            if not (L[k] == U).all():
                raise ValueError(f"bounds of element {i} are not unique")
            out[i] = k
        out.setflags(write=False)
        return out

    def _validate(self):
        J, M = self.join, self.meet
        m = len(self)
        i = np.arange(m)
        if not ((J == J.T).all() and (M == M.T).all()):
            raise ValueError("join or meet is not commutative")
        if not ((J[i[:, None], M] == i[:, None]).all() and (M[i[:, None], J] == i[:, None]).all()):
            raise ValueError("absorption fails")
        a, b, c = np.indices((m, m, m), sparse=True)
        if not (J[J[a, b], c] == J[a, J[b, c]]).all():
            raise ValueError("join is not associative")
        if not (M[M[a, b], c] == M[a, M[b, c]]).all():
            raise ValueError("meet is not associative")
        if not (self.leq == (J == i[None, :])).all():
            raise ValueError("join does not agree with the order")

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"Lattice({self.name!r}, size={len(self)})"

    @property
    def bottom(self):
        return int(np.flatnonzero(self.leq.all(1))[0])

    @property
    def top(self):
        return int(np.flatnonzero(self.leq.all(0))[0])

    def index(self, x):
        return self.elements.index(x)

    def is_chain(self):
        return bool((self.leq | self.leq.T).all())

    def dual(self):
        return Lattice(self.elements, self.leq.T, name=f"dual of {self.name}")

    def to_json(self):
        return {
            "schema": SCHEMA,
            "name": self.name,
            "elements": [_payload_json(x) for x in self.elements],
            "leq": self.leq.tolist(),
        }


def lattice_of(elements, leq_fn, name=""):
    """Build a lattice from payloads and an order predicate, sorted by ``key()`` if available."""
    elements = list(elements)
    if elements and hasattr(elements[0], "key"):
        elements.sort(key=lambda x: x.key())
    m = len(elements)
    L = np.array([[leq_fn(elements[i], elements[j]) for j in range(m)] for i in range(m)], dtype=bool)
    return Lattice(elements, L, name=name)


def chain(k):
    return Lattice(list(range(k)), np.triu(np.ones((k, k), dtype=bool)), name=f"chain {k}")


def divisor_lattice(n):
    ds = [d for d in range(1, n + 1) if n % d == 0]
    return Lattice(ds, [[b % a == 0 for b in ds] for a in ds], name=f"divisors of {n}")


# ---------------------------------------------------------------- certificates

@dataclass(frozen=True)
class ModularityCertificate:
    """Outcome of a modular or distributive law scan; the witness is a triple of indices."""

    law: str
    verdict: bool
    witness: Any = None
    payloads: Any = None
    lattice_size: int = 0

    def __bool__(self):
        return self.verdict

    def to_json(self):
        return {
            "law": self.law,
            "verdict": self.verdict,
            "lattice_size": self.lattice_size,
            "witness": list(self.witness) if self.witness else None,
            "payloads": [_payload_json(p) for p in self.payloads] if self.payloads else None,
        }


def modular_fails(L, x, y, z):
    J, M = L.join, L.meet
    return bool(L.leq[x, z]) and J[x, M[y, z]] != M[J[x, y], z]


def distributive_fails(L, x, y, z):
    J, M = L.join, L.meet
    return M[x, J[y, z]] != J[M[x, y], M[x, z]]


def _scan(L, law, bad, recheck):
    if bad.any():
        w = tuple(int(v) for v in np.argwhere(bad)[0])
        if not recheck(L, *w):
            raise AssertionError("certificate witness failed re-validation")
        return ModularityCertificate(law, False, w, [L.elements[i] for i in w], len(L))
    return ModularityCertificate(law, True, lattice_size=len(L))


def check_modular(L: Lattice) -> ModularityCertificate:
    """Scan all x <= z and y for x v (y ^ z) = (x v y) ^ z."""
    J, M = L.join, L.meet
    x, y, z = np.indices((len(L),) * 3, sparse=True)
    bad = L.leq[x, z] & (J[x, M[y, z]] != M[J[x, y], z])
    return _scan(L, "modular", bad, modular_fails)


def check_distributive(L: Lattice) -> ModularityCertificate:
    J, M = L.join, L.meet
    x, y, z = np.indices((len(L),) * 3, sparse=True)
    bad = M[x, J[y, z]] != J[M[x, y], M[x, z]]
    return _scan(L, "distributive", bad, distributive_fails)


def recheck_certificate(L, cert):
    """Verify a certificate against the lattice, independently of the scan."""
    if cert.verdict:
        return cert.witness is None
    fails = modular_fails if cert.law == "modular" else distributive_fails
    return cert.witness is not None and fails(L, *cert.witness)


# ---------------------------------------------------------------- partitions and congruences

def partitions(n):
    """All partitions of {0..n-1} as block lists, via restricted growth strings."""
    if n == 0:
        yield []
        return
    labels = [0] * n

    def rec(i, top):
        if i == n:
            blocks = [[] for _ in range(top + 1)]
            for a, lab in enumerate(labels):
                blocks[lab].append(a)
            yield blocks
            return
        for lab in range(top + 2):
            labels[i] = lab
            yield from rec(i + 1, max(top, lab))

    labels[0] = 0
    yield from rec(1, 0)


def equivalences(n):
    for blocks in partitions(n):
        yield Relation.from_partition(n, blocks)


def principal_congruence(alg: FiniteAlgebra, a, b) -> Relation:
    """Cg(a, b) by union-find closed under the basic translations."""
    n = alg.size
    if not (0 <= a < n and 0 <= b < n):
        raise ValueError(f"elements {(a, b)} outside the carrier")
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tables = [alg.table(s) for s, k in alg.ops.items() if k > 0]
    work = [(a, b)]
    while work:
        u, v = work.pop()
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        parent[ru] = rv
        # Images of (u, v) under every basic translation: fix all but one slot.
        for T in tables:
            for axis in range(T.ndim):
                tu = np.take(T, u, axis=axis).ravel()
                tv = np.take(T, v, axis=axis).ravel()
                work.extend(zip(tu.tolist(), tv.tolist()))
    blocks = {}
    for x in range(n):
        blocks.setdefault(find(x), []).append(x)
    return Relation.from_partition(n, blocks.values())


def congruences(alg, cap=CON_CAP):
    """All congruences: joins of principal congruences, plus Δ."""
    if alg.size > cap:
        raise SizeLimitError(f"congruence lattice limited to carriers of size <= {cap}")
    n = alg.size
    principal = {principal_congruence(alg, a, b) for a in range(n) for b in range(a + 1, n)}
    found = {Relation.delta(n)} | principal
    frontier = set(found)
    while frontier:
        new = set()
        for x in frontier:
            for p in principal:
                j = (x | p).transitive_closure()
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return sorted(found, key=lambda r: r.key())


def congruences_brute(alg):
    """Oracle: filter every partition by compatibility."""
    return sorted((E for E in equivalences(alg.size) if is_congruence(alg, E)), key=lambda r: r.key())


def relation_lattice(rels, name=""):
    return lattice_of(rels, lambda x, y: x <= y, name=name)


def congruence_lattice(alg, cap=CON_CAP) -> Lattice:
    return relation_lattice(congruences(alg, cap), name=f"Con {alg.name}")


def equivalence_lattice(n, cap=EQV_CAP) -> Lattice:
    if n > cap:
        raise SizeLimitError(f"partition lattice limited to n <= {cap}")
    return relation_lattice(list(equivalences(n)), name=f"Eqv {n}")


# ---------------------------------------------------------------- ideals and filters

@dataclass(frozen=True)
class LatticeIdeal:
    members: frozenset
    generator: int
    principal: bool


def _downsets(L):
    """All nonempty downsets, as bit masks over element indices."""
    m = len(L)
    order = sorted(range(m), key=lambda i: int(L.leq[:, i].sum()))
    below = [sum(1 << j for j in range(m) if L.leq[j, i] and j != i) for i in range(m)]
    out = []

    def rec(pos, mask):
        if pos == m:
            if mask:
                out.append(mask)
            return
        i = order[pos]
        rec(pos + 1, mask)
        if below[i] & ~mask == 0:
            rec(pos + 1, mask | (1 << i))

    rec(0, 0)
    return out


def ideals_of(L: Lattice, cap=IDEAL_CAP):
    """Nonempty join-closed downsets, each with its largest element when it has one."""
    if len(L) > cap:
        raise SizeLimitError(f"ideal enumeration limited to lattices of size <= {cap}")
    m = len(L)
    out = []
    for mask in _downsets(L):
        idx = [i for i in range(m) if (mask >> i) & 1]
        if all((mask >> int(L.join[i, j])) & 1 for i in idx for j in idx):
            top = idx[0]
            for i in idx[1:]:
                top = int(L.join[top, i])
            principal = set(idx) == set(np.flatnonzero(L.leq[:, top]).tolist())
            out.append(LatticeIdeal(frozenset(idx), top, principal))
    out.sort(key=lambda I: (len(I.members), sorted(I.members)))
    return out


def filters_of(L: Lattice, cap=IDEAL_CAP):
    """Nonempty meet-closed upsets, each with its least element."""
    return ideals_of(L.dual(), cap)


def filter_lattice(L: Lattice):
    """Filters ordered by reverse inclusion."""
    fs = filters_of(L)
    return Lattice(fs, [[g.members <= f.members for g in fs] for f in fs], name=f"Fil {L.name}")


def find_isomorphism(L1: Lattice, L2: Lattice):
    """An order isomorphism as a list of indices, or None (backtracking search)."""
    m = len(L1)
    if m != len(L2):
        return None
    down1, up1 = L1.leq.sum(0), L1.leq.sum(1)
    down2, up2 = L2.leq.sum(0), L2.leq.sum(1)
    order = sorted(range(m), key=lambda i: int(down1[i]))
    image = [-1] * m
    used = [False] * m

    def rec(pos):
        if pos == m:
            return True
        i = order[pos]
        for j in range(m):
            if used[j] or down1[i] != down2[j] or up1[i] != up2[j]:
                continue
            if all(L1.leq[i, order[q]] == L2.leq[j, image[order[q]]]
                   and L1.leq[order[q], i] == L2.leq[image[order[q]], j] for q in range(pos)):
                image[i], used[j] = j, True
                if rec(pos + 1):
                    return True
                used[j] = False
        image[i] = -1
        return False

    return image if rec(0) else None


def is_isomorphism(L1, L2, f):
    m = len(L1)
    if m != len(L2) or sorted(f) != list(range(m)):
        return False
    f = np.asarray(f)
    return bool((L1.leq == L2.leq[np.ix_(f, f)]).all())


def isomorphism_verdict(L1, L2, f):
    if is_isomorphism(L1, L2, f):
        return Verdict(True)
    return Verdict(False, witness=list(f), detail=f"map is not an isomorphism {L1.name} -> {L2.name}")
