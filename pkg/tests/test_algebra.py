import itertools
import json

import numpy as np
import pytest

from supalg.algebra import (App, DayTermSequence, FiniteAlgebra, Var, day_identity_report, derive_day_from_maltsev,
                            eval_term, key_lemma_check, load_algebra, parse_term, projection_day_sequences,
                            term_arity, term_table, verify_day, verify_maltsev)
from supalg.base import ArityError, HypothesisError, ParseError, SizeLimitError
from supalg.fixtures import CM_NAMES, MALTSEV_GROUP, bare_set, cyclic_group, day_terms, load_fixture
from supalg.lattice import congruences
from supalg.relations import Relation

P = parse_term(MALTSEV_GROUP)


def mod2(n=4):
    return Relation.from_partition(n, [[a for a in range(n) if a % 2 == r] for r in range(2)])


def test_parse_round_trip():
    t = parse_term("(+ (+ x0 (- x1)) x2)")
    assert parse_term(str(t)) == t
    assert term_arity(t) == 3
    assert parse_term("0") == App("0")


@pytest.mark.parametrize("text", ["", "(+ x0", "x0)", "(+ x0 x1) x2", "()"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_term(text)


def test_eval_examples():
    assert eval_term(cyclic_group(5), P, (1, 2, 3)) == 2
    assert eval_term(cyclic_group(8), Var(1), (4, 7)) == 7
    m = derive_day_from_maltsev(P)
    assert eval_term(cyclic_group(4), m[1], (0, 1, 2, 3)) == 2


def test_term_table_against_eval():
    alg = load_fixture("z4ring")
    t = parse_term("(+ (* x0 x1) (- x2))")
    T = term_table(alg, t, 3)
    for env in itertools.product(range(4), repeat=3):
        assert T[env] == eval_term(alg, t, env) == (env[0] * env[1] - env[2]) % 4


def test_arity_mismatch():
    with pytest.raises(ArityError):
        eval_term(cyclic_group(3), parse_term("(+ x0)"), (0,))


def test_maltsev():
    z6 = cyclic_group(6)
    assert verify_maltsev(z6, P)
    v = verify_maltsev(z6, parse_term("(+ (+ x0 x1) x2)"))
    assert not v and v.witness == (0, 1)
    assert verify_maltsev(cyclic_group(1), parse_term("(+ x0 x1)"))


def test_derived_day_terms_are_y_minus_z_plus_w():
    m = derive_day_from_maltsev(P)
    assert m.d == 2
    T = term_table(cyclic_group(4), m[1], 4)
    x, y, z, w = np.indices((4,) * 4)
    assert (T == (y - z + w) % 4).all()


@pytest.mark.parametrize("n", range(2, 9))
def test_day_on_cyclic_groups(n):
    assert verify_day(cyclic_group(n), derive_day_from_maltsev(P))


def test_mutation_plus_one_breaks_d1():
    m = DayTermSequence((Var(0), parse_term("(+ (+ (+ x1 (- x2)) x3) 1)"), Var(3)))
    alg = cyclic_group(4).extended("Z4 with 1", {"1": (0, [1])})
    v = verify_day(alg, m)
    assert not v
    assert v.witness["identity"] == "D1" and v.witness["i"] == 1 and v.witness["values"] == (0, 0)


def test_x_x_w_breaks_d5():
    v = verify_day(cyclic_group(2), DayTermSequence((Var(0), Var(0), Var(3))))
    assert v.witness["identity"] == "D5"
    assert v.witness["values"] == (0, 0, 1)


def test_identity_report_lists_every_instance():
    rep = day_identity_report(cyclic_group(3), derive_day_from_maltsev(P))
    assert [(name, i) for name, i, _ in rep] == [("D1", 0), ("D1", 1), ("D1", 2), ("D2", 0), ("D3", 2),
                                                 ("D4", 0), ("D5", 1)]
    assert all(v for _, _, v in rep)


def test_lattice_day_terms():
    assert verify_day(load_fixture("lattice2"), day_terms("lattice2"))


@pytest.mark.parametrize("name", CM_NAMES)
def test_bundled_day_terms(name):
    assert verify_day(load_fixture(name), day_terms(name))


def test_bare_set_has_no_day_terms():
    # Over the empty signature every term is a variable, so this search is complete up to d = 4.
    for n in (2, 3):
        assert not any(verify_day(bare_set(n), m) for m in projection_day_sequences(4))


def test_exhaustive_cap():
    with pytest.raises(SizeLimitError):
        verify_day(load_fixture("z12"), derive_day_from_maltsev(P))


def test_empty_carrier_holds():
    assert verify_day(bare_set(0), DayTermSequence((Var(0), Var(3))))


def brute_key_lemma(alg, m, gamma):
    n = alg.size
    for a, b, c, d in itertools.product(range(n), repeat=4):
        if (b, d) not in gamma:
            continue
        right = all((eval_term(alg, t, (a, a, c, c)), eval_term(alg, t, (a, b, d, c))) in gamma for t in m)
        if ((a, c) in gamma) != right:
            return False
    return True


@pytest.mark.parametrize("name", ["z4", "z6", "z2xz2", "lattice2", "twogroups4"])
def test_key_lemma_against_brute_force(name):
    alg, m = load_fixture(name), day_terms(name)
    for gamma in congruences(alg):
        assert key_lemma_check(alg, m, gamma)
        assert brute_key_lemma(alg, m, gamma)


def test_key_lemma_trivial_congruences(z4):
    m = day_terms("z4")
    assert key_lemma_check(z4, m, Relation.delta(4))
    assert key_lemma_check(z4, m, Relation.full(4))
    assert key_lemma_check(z4, m, mod2())


def test_key_lemma_needs_congruence(z4):
    with pytest.raises(HypothesisError):
        key_lemma_check(z4, day_terms("z4"), Relation.from_pairs(4, [(0, 1)]))


def test_key_lemma_can_fail_without_day_terms(z4):
    # The projection sequence x, w is not a Day sequence on Z4, and the lemma breaks for mod 2.
    v = key_lemma_check(z4, DayTermSequence((Var(0), Var(3))), mod2())
    assert not v
    a, b, c, d = v.witness
    assert (b, d) in mod2()


def test_json_round_trip(tmp_path):
    alg = load_fixture("z6ring")
    path = tmp_path / "a.json"
    path.write_text(json.dumps(alg.to_json()))
    back = load_algebra(path)
    assert back.to_json() == alg.to_json()


@pytest.mark.parametrize("payload", ['{"name": "x"', '{"name": "x", "carrier": 2, "ops": [{"sym": "+", '
                                     '"arity": 2, "table": [0, 1, 1]}]}', '[1, 2]'])
def test_malformed_algebra(tmp_path, payload):
    path = tmp_path / "bad.json"
    path.write_text(payload)
    with pytest.raises(ParseError):
        load_algebra(path)


def test_table_value_out_of_range():
    with pytest.raises(ValueError):
        FiniteAlgebra("bad", 2, {"f": (1, [0, 2])})
