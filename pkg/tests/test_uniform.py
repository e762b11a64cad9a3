import itertools

import pytest

from supalg.base import EncodingError
from supalg.fixtures import bare_set, day_terms, load_fixture
from supalg.lattice import check_modular, congruence_lattice, equivalences, find_isomorphism
from supalg.relations import Relation, random_tolerance_seed
from supalg.superequiv import SuperEquivalence
from supalg.uniform import (RelFilter, SuperUniformity, base_check, collapse_check, delta_filter, fg,
                            filter_compose, filter_image, filter_join, filter_meet, filter_preimage,
                            is_compatible_superuniformity, is_compatible_uniformity, is_semiuniformity,
                            is_superuniformity, is_uniformity, least_uniformity_brute, su_join, su_meet,
                            su_permutes, su_shifting_witness, supunif_lattice, ug_of_semiuniformity, unif_join,
                            unif_permutes, weber_bracket, z_map, z_naturality)

MOD2 = Relation.from_partition(4, [[0, 2], [1, 3]])


def path3():
    return Relation.from_pairs(3, [(0, 1), (1, 2)]).refl_sym_closure()


def test_filter_order_is_reverse_inclusion():
    D, F = RelFilter([Relation.delta(2)]), RelFilter([Relation.full(2)])
    assert D <= F and not F <= D
    assert filter_meet(D, F) == D and filter_join(D, F) == F


def test_filter_base_law():
    with pytest.raises(EncodingError):
        RelFilter([Relation.from_pairs(2, [(0, 0)]), Relation.from_pairs(2, [(1, 1)])])
    with pytest.raises(EncodingError):
        RelFilter([])


def test_fg_closes_under_intersection():
    F = fg([Relation.from_pairs(2, [(0, 0), (0, 1)]), Relation.from_pairs(2, [(0, 0), (1, 1)])])
    assert F.minimum == Relation.from_pairs(2, [(0, 0)])


def test_filter_arithmetic():
    for a, b in itertools.product(range(1 << 9), range(0, 1 << 9, 37)):
        R, S = Relation.from_code(3, a), Relation.from_code(3, b)
        F, G = RelFilter([R]), RelFilter([S])
        assert filter_compose(F, G).minimum == R.compose(S)
    F = RelFilter([path3()])
    assert filter_compose(delta_filter(3), F) == F
    assert filter_meet(F, F) == F


def test_uniformity_axioms():
    assert is_uniformity(RelFilter([MOD2]))
    assert is_uniformity(delta_filter(3))
    S = RelFilter([path3()])
    assert is_semiuniformity(S)
    v = is_uniformity(S)
    assert not v and v.witness["axiom"] == "BU_t"
    assert base_check([Relation.from_pairs(2, [(0, 1)])]).witness["axiom"] == "BU_r"


def test_weber_bracket_unfolds():
    V = path3()
    assert weber_bracket([V], 1) == V
    assert weber_bracket([V, V], 2) == V | V.compose(V)
    with pytest.raises(Exception):
        weber_bracket([V] * 6, 6)


def test_weber_symmetry_law(rng):
    for _ in range(30):
        seq = [random_tolerance_seed(4, rng, 0.2) for _ in range(3)]
        opp = weber_bracket([U.opposite() for U in seq], 3).opposite()
        assert opp <= weber_bracket(seq, 3)


def test_ug_of_semiuniformity(rng):
    assert ug_of_semiuniformity(RelFilter([MOD2])).exact == RelFilter([MOD2])
    for _ in range(30):
        R = random_tolerance_seed(3, rng)
        res = ug_of_semiuniformity(RelFilter([R]))
        assert res.exact == RelFilter([R.transitive_closure()]) == least_uniformity_brute(RelFilter([R]))
        assert res.verdict


def test_uniformity_join_law(rng):
    eqs = list(equivalences(4))
    for _ in range(100):
        U, V = (RelFilter([eqs[int(k)]]) for k in rng.integers(0, len(eqs), size=2))
        assert unif_join(U, V) == least_uniformity_brute(filter_join(U, V))


def test_compatible_uniformities(z4):
    assert is_compatible_uniformity(z4, RelFilter([MOD2]))
    assert is_compatible_uniformity(z4, delta_filter(4))
    v = is_compatible_uniformity(z4, RelFilter([Relation.from_pairs(4, [(0, 1)]).refl_sym_closure()]))
    assert not v and v.witness["op"] in z4.ops


def test_uniform_permutability():
    U = RelFilter([MOD2])
    assert unif_permutes(U, U).extra["permutes"]
    z12 = load_fixture("z12")
    from supalg.lattice import congruences
    fs = [RelFilter([C]) for C in congruences(z12, cap=12)]
    assert all(unif_permutes(a, b).extra["permutes"] for a, b in itertools.product(fs, repeat=2))
    A = RelFilter([Relation.from_partition(4, [[0, 1], [2], [3]])])
    B = RelFilter([Relation.from_partition(4, [[0], [1, 2], [3]])])
    v = unif_permutes(A, B)
    assert v and not v.extra["permutes"] and v.extra["separating_pair"]


def test_superuniformities():
    I = SuperEquivalence.of(MOD2)
    E = z_map(I)
    assert is_superuniformity(E)
    assert z_map(SuperEquivalence.of(Relation.delta(3))).top == delta_filter(3)
    assert su_join(E, E) == E and su_meet(E, E) == E
    assert su_permutes(E, E).extra["permutes"]
    assert SuperUniformity.from_json(E.to_json()) == E
    data = dict(E.to_json(), encoding="other")
    with pytest.raises(EncodingError):
        SuperUniformity.from_json(data)


def test_z_preserves_meet_and_join(rng):
    eqs = list(equivalences(4))
    from supalg.superequiv import se_join, se_meet
    for _ in range(100):
        I, J = (SuperEquivalence.of(eqs[int(k)]) for k in rng.integers(0, len(eqs), size=2))
        assert z_map(se_meet(I, J)) == su_meet(z_map(I), z_map(J))
        assert z_map(se_join(I, J)) == su_join(z_map(I), z_map(J))
    assert len({z_map(SuperEquivalence.of(E)) for E in eqs}) == len(eqs)


def test_onto_inverse_image_of_superuniformities(rng):
    eqs = list(equivalences(2))
    for _ in range(20):
        pi = [0, 1] + [int(x) for x in rng.integers(0, 2, size=2)]
        E, F = (z_map(SuperEquivalence.of(eqs[int(k)])) for k in rng.integers(0, 2, size=2))
        pre = lambda G: SuperUniformity([filter_preimage(pi, H) for H in G.filters])
        assert pre(su_join(E, F)) == su_join(pre(E), pre(F))


def test_filter_galois_law():
    for f in itertools.product(range(2), repeat=3):
        for a in range(0, 1 << 9, 7):
            F = RelFilter([Relation.from_code(3, a)])
            for b in range(1 << 4):
                G = RelFilter([Relation.from_code(2, b)])
                assert (filter_image(f, F, 2) <= G) == (F <= filter_preimage(f, G))


def test_su_shifting_and_naturality(z4, rng):
    m = day_terms("z4")
    D = delta_filter(4)
    W, Y, v = su_shifting_witness(z4, m, D, D, D)
    assert W == D and Y == D and v
    for _ in range(50):
        R, F, X = (random_tolerance_seed(4, rng) for _ in range(3))
        assert su_shifting_witness(z4, m, *(RelFilter([S]) for S in (R, F, X)), check_day=False)[2]
        assert z_naturality(z4, m, R, F, X)


def test_supunif_lattices():
    z4 = load_fixture("z4")
    L = supunif_lattice(z4)
    assert len(L) == 3 and L.is_chain() and check_modular(L)
    assert find_isomorphism(L, congruence_lattice(z4)) is not None
    L4 = supunif_lattice(bare_set(4))
    assert len(L4) == 15 and not check_modular(L4)
    for E in L.elements:
        assert is_compatible_superuniformity(z4, E)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_collapse(n):
    v = collapse_check(n)
    assert v, v.witness
    assert v.extra["superequivalences"] == [1, 2, 5][n - 1]


def test_collapse_sampled_fin4():
    v = collapse_check(4, samples=100, seed=1)
    assert v and v.extra["superequivalences"] == 15
