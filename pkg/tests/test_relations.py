import itertools

import pytest
from hypothesis import given, settings, strategies as st

from supalg.algebra import integer_group
from supalg.base import CarrierMismatch, InfiniteSupportError
from supalg.fixtures import cyclic_group, day_terms, load_fixture
from supalg.relations import (IntRelation, Relation, apply_op_to_relations, image_along,
                              is_compatible_relation, is_congruence, m_of_relation, preimage_along,
                              random_relation, relation_from_json, relation_props)


@st.composite
def relations(draw, n=None):
    n = n or draw(st.integers(1, 5))
    return Relation.from_code(n, draw(st.integers(0, (1 << (n * n)) - 1)))


def brute_compose(R, S):
    return {(a, c) for a, b in R.pairs() for b2, c in S.pairs() if b == b2}


def test_compose_example():
    R, S = Relation.from_pairs(3, [(0, 1)]), Relation.from_pairs(3, [(1, 2)])
    assert R.compose(S) == Relation.from_pairs(3, [(0, 2)])


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_compose_laws(data):
    n = data.draw(st.integers(1, 5))
    R, S, T = (data.draw(relations(n)) for _ in range(3))
    assert set(R.compose(S).pairs()) == brute_compose(R, S)
    assert Relation.delta(n).compose(R) == R == R.compose(Relation.delta(n))
    assert R.compose(S).opposite() == S.opposite().compose(R.opposite())
    assert R.compose(S).compose(T) == R.compose(S.compose(T))


def test_opposite_on_random_fin4(rng):
    for _ in range(100):
        R, S = random_relation(4, rng), random_relation(4, rng)
        assert R.compose(S).opposite() == S.opposite().compose(R.opposite())


def test_basic_operations():
    assert Relation.from_pairs(2, [(0, 1)]).opposite() == Relation.from_pairs(2, [(1, 0)])
    R = Relation.delta(3) | Relation.from_pairs(3, [(0, 1), (1, 2)])
    assert (0, 2) in R.power(2) and (0, 2) not in R
    assert R.transitive_closure() == R.power(3)
    assert Relation.from_partition(4, [[0, 2], [1, 3]]).blocks() == [(0, 2), (1, 3)]


@settings(max_examples=80, deadline=None)
@given(relations())
def test_closures(R):
    E = R.equivalence_closure()
    assert E.is_equivalence() and R <= E
    assert R.transitive_closure().is_transitive()
    T = R.refl_sym_closure()
    assert T.is_reflexive() and T.is_symmetric()


def test_props():
    assert all(relation_props(Relation.delta(4)).values())
    T = Relation.from_pairs(3, [(0, 1), (1, 0), (1, 2), (2, 1)]) | Relation.delta(3)
    p = relation_props(T)
    assert p["reflexive"] and p["symmetric"] and not p["transitive"] and not p["equivalence"]
    z4 = cyclic_group(4)
    mod2 = Relation.from_partition(4, [[0, 2], [1, 3]])
    assert relation_props(mod2, z4) == {"reflexive": True, "symmetric": True, "transitive": True,
                                        "equivalence": True, "tolerance_wrt": True}


def test_apply_op_examples():
    z4 = cyclic_group(4)
    R1, R2 = Relation.from_pairs(4, [(0, 1)]), Relation.from_pairs(4, [(0, 2)])
    assert apply_op_to_relations(z4, "+", [R1, R2]) == Relation.from_pairs(4, [(0, 3)])
    D = Relation.delta(4)
    assert apply_op_to_relations(z4, "+", [D, D]) <= D


def test_apply_term_matches_brute_force(z4, rng):
    m1 = day_terms("z4")[1]
    from supalg.algebra import eval_term
    for _ in range(5):
        R = random_relation(4, rng, 0.3)
        want = {(eval_term(z4, m1, tuple(p[0] for p in c)), eval_term(z4, m1, tuple(p[1] for p in c)))
                for c in itertools.product(R.pairs(), repeat=4)}
        assert set(apply_op_to_relations(z4, m1, [R] * 4, arity=4).pairs()) == want


def test_compatibility():
    z4 = cyclic_group(4)
    assert is_compatible_relation(z4, Relation.from_partition(4, [[0, 2], [1, 3]]))
    assert is_compatible_relation(z4, Relation.delta(4))
    R = Relation.from_pairs(4, [(0, 1)]) | Relation.delta(4)
    v = is_compatible_relation(z4, R)
    assert not v
    w = v.witness
    assert w["pair"] not in R
    xs, ys = zip(*w["args"])
    assert z4.apply(w["op"], *xs) == w["pair"][0] and z4.apply(w["op"], *ys) == w["pair"][1]


def test_congruence_needs_matching_carrier():
    assert not is_congruence(cyclic_group(3), Relation.delta(4))
    with pytest.raises(CarrierMismatch):
        is_compatible_relation(cyclic_group(3), Relation.delta(4))


def test_m_of_relation(z4):
    m = day_terms("z4")
    D = Relation.delta(4)
    assert m_of_relation(z4, m, D) == D
    R = Relation.from_pairs(4, [(0, 1)]) | D
    mR = m_of_relation(z4, m, R)
    assert R <= mR
    assert (0, 1) in mR and (3, 0) in mR


@settings(max_examples=40, deadline=None)
@given(relations(4))
def test_m_contains_r(R):
    z4 = load_fixture("z4")
    assert R <= m_of_relation(z4, day_terms("z4"), R)


def test_image_and_preimage():
    ident = [0, 1, 2]
    R = Relation.from_pairs(3, [(0, 1), (2, 2)])
    assert image_along(ident, R, 3) == R == preimage_along(ident, R)
    mod2 = Relation.from_partition(4, [[0, 2], [1, 3]])
    assert image_along([0, 1, 0, 1], mod2, 2) == Relation.delta(2)


def test_galois_law_fin3_to_fin2():
    for f in itertools.product(range(2), repeat=3):
        for c in range(1 << 9):
            R = Relation.from_code(3, c)
            img = image_along(f, R, 2)
            for d in range(1 << 4):
                S = Relation.from_code(2, d)
                assert (img <= S) == (R <= preimage_along(f, S))


def test_json_round_trip():
    R = Relation.from_pairs(3, [(2, 0), (0, 1)])
    assert relation_from_json(R.to_json()) == R
    assert R.to_json()["pairs"] == [[0, 1], [2, 0]]
    I = IntRelation([(3, 5)]).refl_sym_closure()
    assert relation_from_json(I.to_json()) == I


def test_intline_relations():
    R = IntRelation([(3, 5)]).refl_sym_closure()
    assert R.pairs() == [(3, 5), (5, 3)] and R.diagonal
    assert (7, 7) in R and (5, 3) in R and (3, 4) not in R
    S = IntRelation([(5, 6)])
    assert R.compose(S) == IntRelation([(3, 6), (5, 6)])
    assert IntRelation.delta().compose(S) == S
    assert IntRelation([(1, 1)]) <= IntRelation.delta()


def test_intline_infinite_support_detected():
    Z = integer_group()
    R1 = IntRelation([(0, 1)], True)
    with pytest.raises(InfiniteSupportError):
        apply_op_to_relations(Z, "+", [R1, IntRelation.delta()])
    assert apply_op_to_relations(Z, "+", [IntRelation.delta(), IntRelation.delta()]) == IntRelation.delta()
    assert apply_op_to_relations(Z, "-", [IntRelation([(0, 1)])]) == IntRelation([(0, -1)])
