"""The compiled kernels against the Python fallback, and both against brute force."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from supalg import _pykernels, kernels

try:
    from supalg import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None

BACKENDS = [_pykernels] + ([_ckernels] if _ckernels else [])


def rows_strategy(n):
    return st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n)


def pairs_of(rows):
    return {(a, b) for a, r in enumerate(rows) for b in range(len(rows)) if r >> b & 1}


def rows_of(pairs, n):
    out = [0] * n
    for a, b in pairs:
        out[a] |= 1 << b
    return out


@st.composite
def two_relations(draw):
    n = draw(st.integers(1, 9))
    return n, draw(rows_strategy(n)), draw(rows_strategy(n))


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@settings(max_examples=150, deadline=None)
@given(data=two_relations())
def test_compose_matches_pairs(impl, data):
    n, r, s = data
    R, S = pairs_of(r), pairs_of(s)
    want = {(a, c) for a, b in R for b2, c in S if b == b2}
    assert list(impl.compose_rows(r, s)) == rows_of(want, n)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@settings(max_examples=150, deadline=None)
@given(data=two_relations())
def test_closure_is_least_transitive_superset(impl, data):
    n, r, _ = data
    closure = pairs_of(r)
    while True:
        extra = {(a, c) for a, b in closure for b2, c in closure if b == b2} - closure
        if not extra:
            break
        closure |= extra
    assert list(impl.transitive_closure_rows(r)) == rows_of(closure, n)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 5), arity=st.integers(0, 3), data=st.data())
def test_apply_op_matches_brute_force(impl, n, arity, data):
    table = data.draw(st.lists(st.integers(0, n - 1), min_size=n ** arity, max_size=n ** arity))
    rels = [data.draw(rows_strategy(n)) for _ in range(arity)]
    want = set()
    for combo in itertools.product(*(sorted(pairs_of(r)) for r in rels)):
        xs = [p[0] for p in combo]
        ys = [p[1] for p in combo]
        idx = lambda v: sum(c * n ** (arity - 1 - i) for i, c in enumerate(v))
        want.add((table[idx(xs)], table[idx(ys)]))
    assert list(impl.apply_op_rows(table, n, arity, rels)) == rows_of(want, n)


@pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")
def test_backends_agree_on_large_carriers(rng):
    for n in (17, 40, 64):
        r = [int(rng.integers(0, 1 << 62)) % (1 << n) for _ in range(n)]
        s = [int(rng.integers(0, 1 << 62)) % (1 << n) for _ in range(n)]
        assert list(_ckernels.compose_rows(r, s)) == _pykernels.compose_rows(r, s)
        assert list(_ckernels.transitive_closure_rows(r)) == _pykernels.transitive_closure_rows(r)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_backend_switch():
    import subprocess
    import sys
    out = subprocess.run([sys.executable, "-c", "from supalg.kernels import BACKEND; print(BACKEND)"],
                         env={"SUPALG_PURE": "1", "PATH": ""}, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
