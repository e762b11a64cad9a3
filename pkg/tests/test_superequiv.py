import itertools

import pytest

from supalg.algebra import DayTermSequence, Var, integer_group, projection_day_sequences
from supalg.base import HypothesisError
from supalg.fixtures import bare_set, day_terms, load_fixture
from supalg.lattice import check_modular, congruence_lattice, equivalence_lattice, equivalences, find_isomorphism
from supalg.relations import IntRelation, Relation, random_relation, random_tolerance_seed
from supalg.superequiv import (RelIdeal, SuperEquivalence, Xi, adjunction_check, direct_image_se, exponential_se,
                               find_shifting_counterexample, ig, ig_circ, ig_circ_bfs, inverse_image_se,
                               is_compatible_superequivalence, is_morphism, modularity_chain, probe_family,
                               product_space, se_axioms, se_join, se_join_is_composition, se_meet, se_member,
                               se_permutes, seg, seg_compatible, shifting_ideal_instance, shifting_witness,
                               supeqv_lattice, xi)


def sym(n, *pairs):
    return Relation.from_pairs(n, pairs).refl_sym_closure()


def test_ig_is_principal_at_the_union():
    R, S = Relation.from_pairs(3, [(0, 1)]), Relation.from_pairs(3, [(1, 2)])
    I = ig([R, S])
    assert I.top == R | S
    assert I.member(R) and I.member(Relation.empty(3)) and not I.member(Relation.from_pairs(3, [(0, 2)]))


def test_ig_circ_examples():
    D = Relation.delta(3)
    assert ig_circ([D]) == RelIdeal.principal(D)
    E = Relation.from_partition(3, [[0, 2], [1]])
    assert ig_circ([E]).top == E
    assert ig_circ([sym(3, (0, 1)), sym(3, (1, 2))]).top == Relation.full(3)


def test_ig_circ_against_bfs(rng):
    for _ in range(40):
        n = int(rng.integers(1, 5))
        gens = [random_relation(n, rng, 0.25) for _ in range(int(rng.integers(1, 4)))]
        assert ig_circ(gens) == ig_circ_bfs(gens)


def test_superequivalences_are_equivalence_ideals():
    for c in range(1 << 9):
        R = Relation.from_code(3, c)
        assert bool(se_axioms(RelIdeal.principal(R))) == R.is_equivalence()


def test_axiom_witnesses():
    v = se_axioms(RelIdeal.principal(Relation.from_pairs(3, [(0, 1), (0, 0), (1, 1), (2, 2)])))
    assert not v and v.witness["axiom"] == "SE_s"
    assert se_axioms(RelIdeal.principal(Relation.from_pairs(2, [(0, 1)]))).witness["axiom"] == "SE_r"


def test_seg_examples(z4):
    E = Relation.from_partition(4, [[0, 1], [2, 3]])
    assert seg(RelIdeal.principal(E)).top == E
    assert seg(RelIdeal([Relation.from_pairs(2, [(0, 1)])])).top == Relation.full(2)
    I = seg_compatible(z4, RelIdeal([sym(4, (0, 1))]))
    assert I.top == Relation.full(4)


def test_meet_join_match_partition_lattice(rng):
    L = equivalence_lattice(4)
    eqs = L.elements
    for i, j in itertools.product(range(len(L)), repeat=2):
        I, J = SuperEquivalence.of(eqs[i]), SuperEquivalence.of(eqs[j])
        assert se_meet(I, J).top == eqs[L.meet[i, j]]
        assert se_join(I, J).top == eqs[L.join[i, j]]
    for _ in range(200):
        a, b = (SuperEquivalence.of(eqs[int(k)]) for k in rng.integers(0, len(eqs), size=2))
        assert se_meet(a, se_join(a, b)) == a == se_join(a, se_meet(a, b))
        assert se_meet(a, a) == a == se_join(a, a)


def test_membership():
    I = SuperEquivalence.of(Relation.from_partition(3, [[0, 1], [2]]))
    assert se_member(I, Relation.delta(3))
    R = sym(3, (0, 1))
    assert se_member(ig_circ([R]), R)
    line = ig_circ([IntRelation([(0, 1)]).refl_sym_closure()])
    assert not line.member(IntRelation([(0, 5)]).refl_sym_closure())


def test_permutation():
    I = SuperEquivalence.of(Relation.from_partition(4, [[0, 1], [2], [3]]))
    J = SuperEquivalence.of(Relation.from_partition(4, [[0], [1, 2], [3]]))
    assert se_permutes(I, I)
    v = se_permutes(I, J)
    assert not v
    a, b = v.witness
    assert ((a, b) in I.top.compose(J.top)) != ((a, b) in J.top.compose(I.top))
    iff = se_join_is_composition(I, J)
    assert iff and not iff.extra["join_is_composition"]


def test_crossing_partitions_permute():
    # 01|23 and 12|03 compose to the full relation in both orders.
    I = SuperEquivalence.of(Relation.from_partition(4, [[0, 1], [2, 3]]))
    J = SuperEquivalence.of(Relation.from_partition(4, [[1, 2], [0, 3]]))
    assert se_permutes(I, J)


def test_z12_congruences_permute():
    z12 = load_fixture("z12")
    from supalg.lattice import congruences
    ses = [SuperEquivalence.of(C) for C in congruences(z12, cap=12)]
    assert len(ses) == 6
    for I, J in itertools.product(ses, repeat=2):
        v = se_join_is_composition(I, J)
        assert v and v.extra["permutes"]


def test_images():
    ident = [0, 1, 2]
    I = RelIdeal.principal(sym(3, (0, 1)))
    assert direct_image_se(ident, I, 3) == I == inverse_image_se(ident, I)
    D = SuperEquivalence.of(Relation.delta(2))
    assert product_space(D, D).top == Relation.delta(4)


def test_onto_inverse_image_preserves_joins(rng):
    eqs = list(equivalences(2))
    for _ in range(50):
        pi = [0, 1] + [int(x) for x in rng.integers(0, 2, size=2)]
        I, J = (SuperEquivalence.of(eqs[int(k)]) for k in rng.integers(0, 2, size=2))
        lhs = inverse_image_se(pi, se_join(I, J).ideal)
        rhs = se_join(SuperEquivalence(inverse_image_se(pi, I.ideal)), SuperEquivalence(inverse_image_se(pi, J.ideal)))
        assert lhs == rhs.ideal


def test_xi():
    X = xi()
    R = IntRelation([(2, 9), (-4, 0)]).refl_sym_closure()
    assert R in X
    fresh = X.nonprincipal_witness(R)
    assert fresh in X and not fresh <= R
    assert X.axioms([R, IntRelation([(1, 2)]), IntRelation.delta()])
    W = xi(window=1)
    assert W.top == IntRelation([(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)], True)


def test_xi_not_compatible_with_the_integer_group():
    v = Xi().compatibility(integer_group())
    assert not v and v.witness["reason"] == "infinite support"


def test_shifting_trivial_and_examples(z4):
    m = day_terms("z4")
    D = Relation.delta(4)
    W, Y, v = shifting_witness(z4, m, D, D, D)
    assert W == D and Y == D and v
    mod2 = Relation.from_partition(4, [[0, 2], [1, 3]])
    assert shifting_witness(z4, m, Relation.full(4), Relation.full(4), mod2)[2]


def test_shifting_random_triples(z4, rng):
    m = day_terms("z4")
    for _ in range(100):
        R, F, X = (random_tolerance_seed(4, rng) for _ in range(3))
        assert shifting_witness(z4, m, R, F, X, check_day=False)[2]


def test_shifting_hypotheses(z4):
    with pytest.raises(HypothesisError):
        shifting_witness(z4, day_terms("z4"), Relation.from_pairs(4, [(0, 1)]), Relation.delta(4),
                         Relation.delta(4))
    with pytest.raises(HypothesisError):
        shifting_witness(bare_set(4), DayTermSequence((Var(0), Var(3))), *[Relation.delta(4)] * 3)


def test_shifting_fails_without_day_terms():
    # On a bare set every relation is compatible, so only the missing Day terms are to blame.
    R, I1, I2 = find_shifting_counterexample(4)
    assert (R & I1) <= I2 <= I1
    assert not shifting_ideal_instance(R, I1, I2)


def test_modularity_chain_z4ring():
    alg = load_fixture("z4ring")
    m = day_terms("z4ring")
    ses = list(supeqv_lattice(alg).elements)
    for I, Ip, Ipp in itertools.product(ses, repeat=3):
        if I <= Ipp:
            v = modularity_chain(alg, m, I, Ip, Ipp)
            assert v
            if I == Ipp:
                assert v.extra["degenerate"] and v.extra["stabilized_at"] == 0


def test_modularity_chain_rejects_the_bare_set():
    L = equivalence_lattice(4)
    x, y, z = check_modular(L).witness
    I, Ip, Ipp = (SuperEquivalence.of(L.elements[k]) for k in (x, y, z))
    for m in projection_day_sequences(3):
        with pytest.raises(HypothesisError):
            modularity_chain(bare_set(4), m, I, Ip, Ipp)


def test_supeqv_lattices():
    L = supeqv_lattice(load_fixture("z4"))
    assert len(L) == 3 and L.is_chain() and check_modular(L)
    L4 = supeqv_lattice(bare_set(4))
    assert len(L4) == 15 and not check_modular(L4)
    assert len(supeqv_lattice(bare_set(1))) == 1
    for name in ("z6", "z2xz2", "twogroups4"):
        alg = load_fixture(name)
        assert find_isomorphism(supeqv_lattice(alg, cap=8), congruence_lattice(alg)) is not None


def test_compatibility_of_superequivalences(z4):
    assert is_compatible_superequivalence(z4, SuperEquivalence.of(Relation.from_partition(4, [[0, 2], [1, 3]])))
    assert not is_compatible_superequivalence(z4, SuperEquivalence.of(Relation.from_partition(4, [[0, 1], [2, 3]])))


def test_ideal_json_round_trip():
    I = ig_circ([sym(3, (0, 1))])
    assert RelIdeal.from_json(I.to_json()) == I
    S = SuperEquivalence(I)
    assert S.to_json()["closed"] is True


FULL, DISC = SuperEquivalence.of(Relation.full(2)), SuperEquivalence.of(Relation.delta(2))


@pytest.mark.parametrize("B,C", list(itertools.product([FULL, DISC], repeat=2)))
def test_exponential_adjunction(B, C):
    E, points, v = exponential_se(B, C)
    assert v
    for A in (FULL, DISC):
        assert adjunction_check(B, C, E, points, [A])


def test_exponential_counts_for_full_spaces():
    E, points, v = exponential_se(FULL, FULL)
    counts = dict((a, left) for a, left, _ in adjunction_check(FULL, FULL, E, points, [FULL]).extra["counts"])
    assert counts == {2: 16} and len(points) == 4


def test_exponential_of_points():
    one = SuperEquivalence.of(Relation.full(1))
    E, points, v = exponential_se(one, one)
    assert v and len(points) == 1


def test_literal_exponential_fails():
    # Using every map b -> c as a point breaks the bijection when b is full and c discrete.
    E, points, v = exponential_se(FULL, DISC, literal=True)
    assert not v and len(points) == 4
    assert exponential_se(FULL, DISC)[2]


def test_evaluation_is_superequivalent():
    for B, C in itertools.product([FULL, DISC], repeat=2):
        E, points, _ = exponential_se(B, C)
        from supalg.superequiv import evaluation_map
        assert is_morphism(evaluation_map(points, 2), product_space(E, B), C)
    assert len(probe_family()) == 3
