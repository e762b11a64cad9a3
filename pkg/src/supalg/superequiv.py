"""Ideals of relations and superequivalences.

An ideal of relations is stored as an antichain of generators.  Ideals are
join-closed, so an ideal with finitely many generators is the principal ideal
of their union (its ``top``); membership is containment in the top.  The one
non-principal ideal handled here is Ξ on the integers, which is lazy.
"""

import functools
import itertools

from .algebra import FiniteAlgebra, IntLineAlgebra, verify_day
from .base import (SCHEMA, CarrierMismatch, EncodingError, HypothesisError, InfiniteSupportError,
                   SizeLimitError, Verdict)
from .lattice import Lattice, congruences, equivalences, lattice_of
from .relations import (INTLINE, IntRelation, Relation, apply_op_to_relations, compatibility_witness,
                        delta, image_along, m_of_relation, preimage_along, product_relation,
                        relation_from_json)

SUPEQV_CAP = 5
STEP_CAP = 10_000


def _carrier_of(R):
    return R.carrier


def _union(rels):
    rels = list(rels)
    out = rels[0]
    for R in rels[1:]:
        out = out | R
    return out


def _empty_like(carrier):
    return IntRelation() if carrier.kind == "intline" else Relation.empty(carrier.n)


def _maximal(rels):
    rels = sorted(set(rels), key=lambda r: r.key(), reverse=True)
    keep = []
    for R in rels:
        if not any(R <= S for S in keep):
            keep.append(R)
    return sorted(keep, key=lambda r: r.key())


class RelIdeal:
    """An ideal of relations given by a generator antichain."""

    def __init__(self, generators=(), carrier=None, closed=False):
        gens = list(generators)
        if not gens:
            if carrier is None:
                raise ValueError("an ideal with no generators needs an explicit carrier")
            gens = [_empty_like(carrier)]
        carrier = carrier or gens[0].carrier
        for R in gens:
            if R.carrier != carrier:
                raise CarrierMismatch(f"generator on {R.carrier}, ideal on {carrier}")
        self.carrier = carrier
        self.generators = tuple(_maximal(gens))
        self.top = _union(self.generators)
        self.closed = closed

    @classmethod
    def principal(cls, R, closed=False):
        return cls([R], closed=closed)

    def member(self, R):
        if R.carrier != self.carrier:
            raise CarrierMismatch(f"relation on {R.carrier}, ideal on {self.carrier}")
        return R <= self.top

    __contains__ = member

    def __le__(self, other):
        return self.top <= other.top

    def __eq__(self, other):
        return isinstance(other, RelIdeal) and self.carrier == other.carrier and self.top == other.top

    def __hash__(self):
        return hash(self.top)

    def __repr__(self):
        return f"RelIdeal({list(self.generators)})"

    def key(self):
        return self.top.key()

    def opposite(self):
        return RelIdeal([R.opposite() for R in self.generators], self.carrier)

    def meet(self, other):
        return RelIdeal([R & S for R in self.generators for S in other.generators], self.carrier)

    def join(self, other):
        return RelIdeal(self.generators + other.generators, self.carrier)

    def compose(self, other):
        """Ig{R o S | R in self, S in other}."""
        return RelIdeal([R.compose(S) for R in self.generators for S in other.generators], self.carrier)

    def to_json(self):
        return {
            "schema": SCHEMA,
            "carrier": self.carrier.to_json(),
            "generators": [R.to_json() for R in self.generators],
            "closed": self.closed,
        }

    @classmethod
    def from_json(cls, data):
        if data.get("encoding") not in (None, "ideal"):
            raise EncodingError(f"not a plain ideal: {data.get('encoding')}")
        gens = [relation_from_json(g) for g in data["generators"]]
        carrier = INTLINE if data["carrier"] == "intline" else None
        if carrier is None:
            from .relations import Carrier
            carrier = Carrier.finite(int(data["carrier"]["finite"]))
        return cls(gens, carrier, bool(data.get("closed", False)))


def ig(gens, carrier=None) -> RelIdeal:
    return RelIdeal(gens, carrier)


def _reflexive_transitive(R):
    if isinstance(R, Relation):
        return (R | Relation.delta(R.n)).transitive_closure()
    out = R | IntRelation.delta()
    for _ in range(STEP_CAP):
        nxt = out.compose(out)
        if nxt == out:
            return out
        out = nxt
    raise AssertionError("composition closure diverged on finite-support generators")


def ig_circ(gens, carrier=None) -> RelIdeal:
    """Ideal generated by all finite compositions of gens and Δ.

    Join-closure makes this the principal ideal of the reflexive transitive
    closure of the union of the generators.
    """
    base = RelIdeal(gens, carrier)
    return RelIdeal([_reflexive_transitive(base.top)], base.carrier, closed=True)


def ig_circ_bfs(gens, carrier=None, step_cap=STEP_CAP) -> RelIdeal:
    """Oracle for ig_circ: breadth-first closure of the generator set under composition."""
    gens = list(gens)
    carrier = carrier or gens[0].carrier
    found = set(gens) | {delta(carrier)}
    frontier = list(found)
    steps = 0
    while frontier:
        new = []
        for R in frontier:
            for S in list(found):
                for T in (R.compose(S), S.compose(R)):
                    if T not in found:
                        found.add(T)
                        new.append(T)
                        steps += 1
                        if steps > step_cap:
                            raise AssertionError("composition closure exceeded the step cap")
        frontier = new
    return RelIdeal(found, carrier, closed=True)


# ---------------------------------------------------------------- superequivalences

def se_axioms(ideal: RelIdeal) -> Verdict:
    """SE_r, SE_s, SE_t on the ceiling, with the first failing axiom as witness."""
    T = ideal.top
    D = delta(ideal.carrier)
    if not D <= T:
        return Verdict(False, witness={"axiom": "SE_r"}, detail="Δ is not in the ideal")
    if not T.opposite() <= T:
        pair = next(p for p in T.pairs() if (p[1], p[0]) not in T)
        return Verdict(False, witness={"axiom": "SE_s", "pair": pair}, detail=f"{pair} has no opposite")
    TT = T.compose(T)
    if not TT <= T:
        pair = next(p for p in TT.pairs() if p not in T)
        return Verdict(False, witness={"axiom": "SE_t", "pair": pair}, detail=f"{pair} in T o T but not in T")
    return Verdict(True)


is_superequivalence = se_axioms


class SuperEquivalence:
    """A reflexive, symmetric, composition-closed ideal of relations (checked on construction)."""

    def __init__(self, ideal: RelIdeal, check=True):
        if check:
            v = se_axioms(ideal)
            if not v:
                raise HypothesisError(f"not a superequivalence: {v.detail}")
        self.ideal = ideal

    @classmethod
    def of(cls, R):
        return cls(RelIdeal.principal(R, closed=True))

    @property
    def top(self):
        return self.ideal.top

    @property
    def carrier(self):
        return self.ideal.carrier

    def member(self, R):
        return self.ideal.member(R)

    __contains__ = member

    def __le__(self, other):
        return self.ideal <= other.ideal

    def __eq__(self, other):
        return isinstance(other, SuperEquivalence) and self.ideal == other.ideal

    def __hash__(self):
        return hash(self.ideal)

    def __repr__(self):
        return f"SuperEquivalence({self.top!r})"

    def key(self):
        return self.ideal.key()

    def to_json(self):
        return self.ideal.to_json()


def seg(ideal: RelIdeal) -> SuperEquivalence:
    gens = list(ideal.generators) + [R.opposite() for R in ideal.generators]
    return SuperEquivalence(ig_circ(gens, ideal.carrier))


def seg_compatible(alg: FiniteAlgebra, ideal: RelIdeal, step_cap=STEP_CAP) -> SuperEquivalence:
    """Least compatible superequivalence above the ideal: alternate SEg with operation images."""
    if ideal.carrier.n != alg.size:
        raise CarrierMismatch("ideal and algebra carriers differ")
    cur = seg(ideal)
    for _ in range(step_cap):
        T = cur.top
        images = [apply_op_to_relations(alg, s, [T] * k) for s, k in alg.ops.items()]
        nxt = seg(RelIdeal([T] + images, ideal.carrier))
        if nxt == cur:
            return cur
        cur = nxt
    raise AssertionError("compatible closure did not stabilize")


def is_compatible_superequivalence(alg, se) -> Verdict:
    """ω(R1..Rn) in the ideal for each basic ω and ceiling elements R_i."""
    if isinstance(se, Xi):
        return se.compatibility(alg)
    v = se_axioms(se.ideal if isinstance(se, SuperEquivalence) else se)
    if not v:
        return v
    T = se.top
    w = compatibility_witness(alg, T)
    if w is None:
        return Verdict(True)
    return Verdict(False, witness=w, detail=f"{w['op']} image of the ceiling leaves the ideal at {w['pair']}")


def se_meet(I, J) -> SuperEquivalence:
    _same(I, J)
    return SuperEquivalence(I.ideal.meet(J.ideal))


def se_join(I, J) -> SuperEquivalence:
    """Ig∘ of the union."""
    _same(I, J)
    return SuperEquivalence(ig_circ(I.ideal.generators + J.ideal.generators, I.carrier))


def se_member(I, R):
    return I.member(R)


def _same(I, J):
    if I.carrier != J.carrier:
        raise CarrierMismatch(f"{I.carrier} vs {J.carrier}")


def se_compose(I, J) -> RelIdeal:
    _same(I, J)
    return I.ideal.compose(J.ideal)


def se_permutes(I, J) -> Verdict:
    """I o J = J o I, with a pair separating them on failure."""
    a, b = se_compose(I, J), se_compose(J, I)
    if a == b:
        return Verdict(True)
    extra = (a.top & _complement(b.top)) if not a <= b else (b.top & _complement(a.top))
    pair = extra.pairs()[0]
    return Verdict(False, witness=pair, detail=f"{pair} separates I o J from J o I")


def _complement(R):
    return Relation(R.n, [~r & ((1 << R.n) - 1) for r in R.rows])


def se_join_is_composition(I, J) -> Verdict:
    """Checks both directions of: I, J permute iff I v J = I o J."""
    permutes = bool(se_permutes(I, J))
    join_eq = se_join(I, J).ideal == se_compose(I, J)
    holds = permutes == join_eq
    return Verdict(holds, witness=None if holds else {"permutes": permutes, "join_is_composition": join_eq},
                   extra={"permutes": permutes, "join_is_composition": join_eq})


# ---------------------------------------------------------------- maps and products

def inverse_image_se(f, ideal: RelIdeal) -> RelIdeal:
    from .relations import Carrier
    return RelIdeal([preimage_along(f, R) for R in ideal.generators], Carrier.finite(len(f)))


def direct_image_se(f, ideal: RelIdeal, target_n) -> RelIdeal:
    from .relations import Carrier
    return RelIdeal([image_along(f, R, target_n) for R in ideal.generators], Carrier.finite(target_n))


def product_space(I, J) -> SuperEquivalence:
    """Ig{R x R'} on the product carrier, (a, b) encoded as a * |J| + b."""
    return SuperEquivalence(RelIdeal([product_relation(R, S) for R in I.ideal.generators
                                      for S in J.ideal.generators]))


def is_morphism(f, I, J):
    """f(I) <= J: f maps the ceiling of I into J."""
    return image_along(f, I.top, J.carrier.n) <= J.top


# ---------------------------------------------------------------- Ξ on the integers

class Xi:
    """Ξ(Z): all relations with finitely many off-diagonal pairs, lazily.

    ``window(w)`` gives the explicit superequivalence whose ceiling is built
    from the generators with support in [-w, w].
    """

    carrier = INTLINE

    @staticmethod
    def generators_for(R):
        gens = [IntRelation([p], False).refl_sym_closure() for p in R.off_diagonal()]
        return gens or [IntRelation.delta()]

    def member(self, R) -> bool:
        if not isinstance(R, IntRelation):
            raise CarrierMismatch("Ξ lives on the integer line")
        closure = ig_circ(self.generators_for(R), INTLINE)
        return R <= closure.top

    __contains__ = member

    def window(self, w) -> SuperEquivalence:
        pts = range(-w, w + 1)
        gens = [IntRelation([(a, b)], False).refl_sym_closure() for a in pts for b in pts if a < b]
        return SuperEquivalence(ig_circ(gens or [IntRelation.delta()], INTLINE))

    def nonprincipal_witness(self, R):
        """A member of Ξ that is not below R: a symmetric pair outside R's support."""
        s = max((abs(x) for x in R.support()), default=0)
        fresh = IntRelation([(s + 1, s + 2)], False).refl_sym_closure()
        assert self.member(fresh) and not fresh <= R
        return fresh

    def axioms(self, samples) -> Verdict:
        """SE_r, SE_s, SE_t checked on the given member relations."""
        if not self.member(IntRelation.delta()):
            return Verdict(False, witness={"axiom": "SE_r"})
        for R in samples:
            if not self.member(R):
                return Verdict(False, witness={"axiom": "member", "relation": R})
            if not self.member(R.opposite()):
                return Verdict(False, witness={"axiom": "SE_s", "relation": R})
            for S in samples:
                if not self.member(R.compose(S)):
                    return Verdict(False, witness={"axiom": "SE_t", "relation": (R, S)})
        return Verdict(True)

    def compatibility(self, alg: IntLineAlgebra, sample=None) -> Verdict:
        """Compatibility fails when an operation image of a member has infinite support."""
        R = sample or IntRelation([(0, 1)], False).refl_sym_closure()
        for sym, k in alg.ops.items():
            try:
                image = apply_op_to_relations(alg, sym, [R] * k)
            except InfiniteSupportError as exc:
                return Verdict(False, witness={"op": sym, "relation": R.to_json(), "reason": "infinite support"},
                               detail=str(exc))
            if not self.member(image):
                return Verdict(False, witness={"op": sym, "relation": R.to_json()})
        return Verdict(True)


def xi(window=None):
    X = Xi()
    return X if window is None else X.window(window)


# ---------------------------------------------------------------- shifting lemma

def _require_day(alg, m):
    v = verify_day(alg, m)
    if not v:
        raise HypothesisError(f"Day identities fail: {v.detail}")


def _require_tolerance_seed(name, R):
    if not (R.is_reflexive() and R.is_symmetric()):
        raise HypothesisError(f"{name} must be reflexive and symmetric")


def shifting_witness(alg, m, R, F, X, check_day=True):
    """W = m(X) u (m(R) n (m(F) o m(F) o m(X))), Y = m(W u W^op)^(2d); checks (R o X o R) n F <= Y."""
    if check_day:
        _require_day(alg, m)
    for name, S in (("R", R), ("F", F), ("X", X)):
        _require_tolerance_seed(name, S)
    mR, mF, mX = (m_of_relation(alg, m, S) for S in (R, F, X))
    W = mX | (mR & mF.compose(mF).compose(mX))
    Y = m_of_relation(alg, m, W | W.opposite()).power(2 * m.d)
    lhs = R.compose(X).compose(R) & F
    if lhs <= Y:
        return W, Y, Verdict(True)
    pair = next(p for p in lhs.pairs() if p not in Y)
    return W, Y, Verdict(False, witness=pair, detail=f"{pair} in (R o X o R) n F but not in Y")


def shifting_ideal_instance(R, I1, I2):
    """The ideal form: given R ^ I1 <= I2 <= I1, is (R o (I1 ^ I2) o R) ^ I1 <= I2?"""
    if not ((R & I1) <= I2 and I2 <= I1):
        raise HypothesisError("needs R ^ I1 <= I2 <= I1")
    lhs = R.compose(I1 & I2).compose(R) & I1
    return Verdict(lhs <= I2, witness=None if lhs <= I2 else next(p for p in lhs.pairs() if p not in I2))


def find_shifting_counterexample(n):
    """Search equivalences I2 <= I1 and reflexive symmetric R on Fin(n) with the ideal form failing."""
    eqs = list(equivalences(n))
    tols = [R for R in _tolerance_tops(n)]
    for I1 in eqs:
        for I2 in eqs:
            if not I2 <= I1:
                continue
            for R in tols:
                if (R & I1) <= I2 and not shifting_ideal_instance(R, I1, I2):
                    return R, I1, I2
    return None


def _tolerance_tops(n):
    off = [(a, b) for a in range(n) for b in range(a + 1, n)]
    for bits in range(1 << len(off)):
        pairs = [p for i, p in enumerate(off) if (bits >> i) & 1]
        yield Relation.from_pairs(n, pairs).refl_sym_closure()


# ---------------------------------------------------------------- modularity chain

def modularity_chain(alg, m, I, Ip, Ipp, max_steps=64):
    """Iterate the proof's chains R_k, R'_k and confirm (I v I') ^ I'' <= I v (I' ^ I'').

    R_0 = R'_0 = I', R_{k+1} = R_k o I o R_k, R'_{k+1} = R'_k o (I1 ^ I2) o R'_k with
    I1 = I'' and I2 = I v (I' ^ I'').  At every step R'_k ^ I1 <= I2 is checked.
    """
    _require_day(alg, m)
    for name, S in (("I", I), ("I'", Ip), ("I''", Ipp)):
        v = is_compatible_superequivalence(alg, S)
        if not v:
            raise HypothesisError(f"{name} is not a compatible superequivalence: {v.detail}")
    if not I <= Ipp:
        raise HypothesisError("needs I <= I''")
    lhs = se_meet(se_join(I, Ip), Ipp)
    rhs = se_join(I, se_meet(Ip, Ipp))
    if I == Ipp:
        # Degenerate: both sides equal I, no iteration needed.
        holds = lhs <= rhs
        return Verdict(holds, extra={"stabilized_at": 0, "trace": [], "degenerate": True})
    I1, I2 = Ipp.top, rhs.top
    X = I1 & I2
    Rk = Rpk = Ip.top
    trace = []
    for k in range(max_steps):
        step_ok = (Rpk & I1) <= I2 and Rk <= Rpk
        trace.append({"k": k, "R": Rk.to_json(), "R_prime": Rpk.to_json(), "shift_ok": step_ok})
        if not step_ok:
            return Verdict(False, witness={"k": k}, detail=f"R'_{k} ^ I1 <= I2 fails", extra={"trace": trace})
        nRk = Rk.compose(I.top).compose(Rk)
        nRpk = Rpk.compose(X).compose(Rpk)
        if nRk == Rk and nRpk == Rpk:
            break
        Rk, Rpk = nRk, nRpk
    else:
        raise AssertionError("chain did not stabilize")
    # The union of the R_k is I v I'.
    assert Rk == se_join(I, Ip).top
    holds = lhs <= rhs
    return Verdict(holds, witness=None if holds else {"lhs": lhs, "rhs": rhs},
                   extra={"stabilized_at": k, "trace": trace, "degenerate": False})


# ---------------------------------------------------------------- lattice of compatible SEs

@functools.lru_cache(maxsize=None)
def _se_tops(n, space):
    """Tops of principal superequivalences among the candidate relations."""
    if space == "all":
        cands = (Relation.from_code(n, c) for c in range(1 << (n * n)))
    elif space == "refl-sym":
        cands = _tolerance_tops(n)
    else:
        cands = equivalences(n)
    return tuple(R for R in cands if se_axioms(RelIdeal.principal(R)))


def supeqv_lattice(alg: FiniteAlgebra, cap=SUPEQV_CAP) -> Lattice:
    """Compatible superequivalences, enumerated two ways and cross-checked.

    (a) principal ideals of congruences; (b) principal ideals filtered by the
    axioms and compatibility, over all relations for n <= 4, reflexive
    symmetric relations for n = 5, and equivalence relations above that.
    """
    n = alg.size
    if n > cap:
        raise SizeLimitError(f"supeqv_lattice limited to carriers of size <= {cap}")
    via_con = {SuperEquivalence.of(C) for C in congruences(alg, cap=max(cap, n))}
    space = "all" if n <= 4 else "refl-sym" if n == 5 else "equivalences"
    direct = {SuperEquivalence(RelIdeal.principal(T, closed=True), check=False) for T in _se_tops(n, space)
              if compatibility_witness(alg, T) is None}
    if via_con != direct:
        raise AssertionError("the two enumerations of compatible superequivalences disagree")
    return lattice_of(via_con, lambda x, y: x <= y, name=f"SupEqv {alg.name}")


# ---------------------------------------------------------------- exponential object

def _all_functions(src_n, dst_n):
    return itertools.product(range(dst_n), repeat=src_n)


def _space(n, full):
    return SuperEquivalence.of(Relation.full(n) if full else Relation.delta(n))


def probe_family():
    """Every superequivalence space with at most two points: 1-point, 2-point full, 2-point discrete."""
    return [_space(1, True), _space(2, True), _space(2, False)]


def function_space(B, C, literal=False):
    """Points of the exponential: superequivalent maps b -> c, or every map if ``literal``."""
    b_n, c_n = B.carrier.n, C.carrier.n
    return [h for h in _all_functions(b_n, c_n) if literal or is_morphism(h, B, C)]


def curry(g, a_n, b_n, points):
    """The map a -> points sending x to g(x, -), or None if some slice is not a point."""
    index = {h: i for i, h in enumerate(points)}
    out = []
    for x in range(a_n):
        h = tuple(g[x * b_n:(x + 1) * b_n])
        if h not in index:
            return None
        out.append(index[h])
    return out


def exponential_se(B, C, size_cap=16, probes=None, literal=False):
    """(C^B, points, adjunction verdict).

    The ideal is the SE join of SEg(curry(f)(I_a)) over superequivalent
    f: a x b -> c for a in the probe family.  Points are the superequivalent
    maps b -> c; ``literal=True`` uses all of c^b instead, for which the
    bijection fails as soon as some map b -> c is not superequivalent.
    """
    b_n, c_n = B.carrier.n, C.carrier.n
    if c_n ** b_n > size_cap:
        raise SizeLimitError(f"function space of size {c_n ** b_n} exceeds the cap {size_cap}")
    from .relations import Carrier
    probes = probe_family() if probes is None else probes
    points = function_space(B, C, literal)
    e_n = len(points)
    gens = [Relation.delta(e_n)]
    for A in probes:
        a_n = A.carrier.n
        AB = product_space(A, B)
        for g in _all_functions(a_n * b_n, c_n):
            if is_morphism(g, AB, C):
                gens.append(image_along(curry(g, a_n, b_n, points), A.top, e_n))
    E = seg(RelIdeal(gens, Carrier.finite(e_n)))
    return E, points, adjunction_check(B, C, E, points, probes)


def evaluation_map(points, b_n):
    """ε: C^B x b -> c, the point h paired with y going to h(y)."""
    return [h[y] for h in points for y in range(b_n)]


def adjunction_check(B, C, E, points, probes) -> Verdict:
    """For each probe a: g: a x b -> c is superequivalent iff curry(g): a -> C^B is, and
    the two hom-sets have the same size.  Also checks the evaluation map."""
    b_n, c_n = B.carrier.n, C.carrier.n
    counts = []
    for A in probes:
        a_n = A.carrier.n
        AB = product_space(A, B)
        left = 0
        for g in _all_functions(a_n * b_n, c_n):
            lg = is_morphism(g, AB, C)
            cg = curry(g, a_n, b_n, points)
            rg = cg is not None and is_morphism(cg, A, E)
            left += lg
            if lg != rg:
                return Verdict(False, witness={"a": A.top.to_json(), "g": list(g), "left": lg, "right": rg},
                               detail="currying does not restrict to a bijection")
        right = sum(is_morphism(h, A, E) for h in _all_functions(a_n, len(points)))
        counts.append((a_n, left, right))
        if left != right:
            return Verdict(False, witness={"a": A.top.to_json(), "left": left, "right": right},
                           detail=f"hom-set sizes differ: {left} vs {right}")
    ev = evaluation_map(points, b_n)
    if not is_morphism(ev, product_space(E, B), C):
        return Verdict(False, witness={"map": "evaluation"}, detail="evaluation map is not superequivalent")
    return Verdict(True, extra={"counts": counts})
