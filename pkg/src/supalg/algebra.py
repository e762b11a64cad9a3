"""Finite algebras, terms, and exhaustive checks of Mal'tsev and Day identities."""

import itertools
import json
import re
from dataclasses import dataclass

import numpy as np

from .base import SCHEMA, ArityError, HypothesisError, ParseError, SizeLimitError, Verdict

# Identity checks enumerate every tuple; refuse carriers above this size.
MAX_EXHAUSTIVE = 8


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class App:
    sym: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.sym
        return "(" + " ".join([self.sym] + [str(a) for a in self.args]) + ")"


Term = Var | App

_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_VAR = re.compile(r"x(\d+)$")


def parse_term(text: str) -> Term:
    """Parse an s-expression such as ``(p x0 (p x2 x1 x0) x3)``.

    Atoms ``x0, x1, ...`` are variables; any other bare atom is a constant.
    """
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise ParseError("empty term")
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError(f"unexpected end of term: {text!r}")
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            raise ParseError(f"unexpected ')' in {text!r}")
        if tok != "(":
            m = _VAR.match(tok)
            return Var(int(m.group(1))) if m else App(tok)
        if pos >= len(tokens) or tokens[pos] in "()":
            raise ParseError(f"expected operation symbol in {text!r}")
        sym = tokens[pos]
        pos += 1
        args = []
        while True:
            if pos >= len(tokens):
                raise ParseError(f"unbalanced parentheses in {text!r}")
            if tokens[pos] == ")":
                pos += 1
                return App(sym, tuple(args))
            args.append(parse())

    term = parse()
    if pos != len(tokens):
        raise ParseError(f"trailing input in {text!r}")
    return term


def term_arity(t: Term) -> int:
    """Number of variables the term needs, i.e. max index + 1."""
    if isinstance(t, Var):
        return t.index + 1
    return max((term_arity(a) for a in t.args), default=0)


def substitute(t: Term, args) -> Term:
    if isinstance(t, Var):
        return args[t.index]
    return App(t.sym, tuple(substitute(a, args) for a in t.args))


def symbols_of(t: Term):
    if isinstance(t, Var):
        return set()
    out = {(t.sym, len(t.args))}
    for a in t.args:
        out |= symbols_of(a)
    return out


def as_term(t):
    return parse_term(t) if isinstance(t, str) else t


# ---------------------------------------------------------------- algebras

@dataclass(frozen=True)
class Signature:
    symbols: tuple  # of (name, arity)

    def __post_init__(self):
        names = [s for s, _ in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError("operation names must be unique")
        if any(k < 0 for _, k in self.symbols):
            raise ValueError("arities must be nonnegative")

    def arity(self, sym):
        for s, k in self.symbols:
            if s == sym:
                return k
        raise ArityError(f"unknown operation symbol {sym!r}")


class FiniteAlgebra:
    """Operation tables over {0..n-1}; tables are row-major, last argument fastest."""

    def __init__(self, name: str, size: int, ops: dict):
        if size < 0:
            raise ValueError("carrier size must be nonnegative")
        self.name = name
        self.size = size
        self._tables = {}
        for sym, (arity, table) in ops.items():
            arr = np.asarray(table, dtype=np.int64).reshape(-1)
            if arr.size != size ** arity:
                raise ValueError(f"table for {sym!r} has {arr.size} entries, expected {size ** arity}")
            if arr.size and (arr.min() < 0 or arr.max() >= size):
                raise ValueError(f"table for {sym!r} has entries outside the carrier")
            if size == 0 and arity == 0:
                raise ValueError("an empty algebra cannot have constants")
            arr.setflags(write=False)
            self._tables[sym] = (arity, arr)
        self.signature = Signature(tuple((s, k) for s, (k, _) in self._tables.items()))
        self._cache = {}

    def __repr__(self):
        return f"FiniteAlgebra({self.name!r}, size={self.size}, ops={list(self._tables)})"

    @property
    def ops(self):
        return {s: k for s, (k, _) in self._tables.items()}

    def arity(self, sym):
        if sym not in self._tables:
            raise ArityError(f"unknown operation symbol {sym!r} in {self.name}")
        return self._tables[sym][0]

    def flat_table(self, sym):
        self.arity(sym)
        return self._tables[sym][1]

    def table(self, sym):
        k, flat = self._tables[sym]
        return flat.reshape((self.size,) * k)

    def apply(self, sym, *args):
        k = self.arity(sym)
        if len(args) != k:
            raise ArityError(f"{sym!r} takes {k} arguments, got {len(args)}")
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return int(self._tables[sym][1][idx])

    def extended(self, name, ops):
        merged = {s: (k, t) for s, (k, t) in self._tables.items()}
        merged.update(ops)
        return FiniteAlgebra(name, self.size, merged)

    def to_json(self):
        return {
            "schema": SCHEMA,
            "name": self.name,
            "carrier": self.size,
            "ops": [{"sym": s, "arity": k, "table": t.tolist()} for s, (k, t) in self._tables.items()],
        }

    @classmethod
    def from_json(cls, data):
        try:
            ops = {op["sym"]: (int(op["arity"]), op["table"]) for op in data["ops"]}
            return cls(data.get("name", "algebra"), int(data["carrier"]), ops)
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed algebra JSON: {exc}") from exc


def load_algebra(path) -> FiniteAlgebra:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
    try:
        return FiniteAlgebra.from_json(data)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc


class IntLineAlgebra:
    """An algebra on the integers with polynomial operations given as callables.

    ``surjective`` lists the symbols whose operation maps onto the integers,
    which is what lets the diagonal survive an operation image.
    """

    size = None

    def __init__(self, name: str, ops: dict, surjective=()):
        self.name = name
        self._ops = {s: (k, f) for s, (k, f) in ops.items()}
        self.surjective = frozenset(surjective)
        self.signature = Signature(tuple((s, k) for s, (k, _) in self._ops.items()))

    @property
    def ops(self):
        return {s: k for s, (k, _) in self._ops.items()}

    def arity(self, sym):
        if sym not in self._ops:
            raise ArityError(f"unknown operation symbol {sym!r} in {self.name}")
        return self._ops[sym][0]

    def apply(self, sym, *args):
        k, f = self._ops[sym]
        if len(args) != k:
            raise ArityError(f"{sym!r} takes {k} arguments, got {len(args)}")
        return f(*args)


def integer_group() -> IntLineAlgebra:
    return IntLineAlgebra(
        "Z",
        {"+": (2, lambda a, b: a + b), "-": (1, lambda a: -a), "0": (0, lambda: 0)},
        surjective=("+", "-"),
    )


# ---------------------------------------------------------------- evaluation

def eval_term(alg, t: Term, env) -> int:
    """Value of the term operation of ``t`` at ``env`` (plain recursive evaluation)."""
    if isinstance(t, Var):
        if t.index >= len(env):
            raise ArityError(f"environment of length {len(env)} too short for x{t.index}")
        return env[t.index]
    k = alg.arity(t.sym)
    if k != len(t.args):
        raise ArityError(f"{t.sym!r} has arity {k} but is applied to {len(t.args)} arguments")
    return alg.apply(t.sym, *(eval_term(alg, a, env) for a in t.args))


def term_table(alg: FiniteAlgebra, t: Term, arity: int) -> np.ndarray:
    """The term operation of ``t`` as an array of shape (n,)*arity."""
    t = as_term(t)
    if term_arity(t) > arity:
        raise ArityError(f"term {t} needs {term_arity(t)} variables, arity is {arity}")
    key = (t, arity)
    if key not in alg._cache:
        n = alg.size
        out = np.broadcast_to(_table(alg, t, arity), (n,) * arity).copy()
        out.setflags(write=False)
        alg._cache[key] = out
    return alg._cache[key]


def _table(alg, t, arity):
    n = alg.size
    if isinstance(t, Var):
        shape = [1] * arity
        shape[t.index] = n
        return np.arange(n, dtype=np.int64).reshape(shape)
    k = alg.arity(t.sym)
    if k != len(t.args):
        raise ArityError(f"{t.sym!r} has arity {k} but is applied to {len(t.args)} arguments")
    if k == 0:
        return np.full([1] * arity, alg.table(t.sym)[()], dtype=np.int64)
    children = [_table(alg, a, arity) for a in t.args]
    return alg.table(t.sym)[tuple(children)]


def _require_exhaustive(alg):
    if alg.size is None or alg.size > MAX_EXHAUSTIVE:
        raise SizeLimitError(f"exhaustive identity checks need carrier size <= {MAX_EXHAUSTIVE}")


# ---------------------------------------------------------------- Mal'tsev / Day

def verify_maltsev(alg: FiniteAlgebra, p) -> Verdict:
    """Check p(x,x,y)=y and p(x,y,y)=x for all x, y.  Witness: the first failing (x, y)."""
    p = as_term(p)
    if term_arity(p) > 3:
        raise ArityError("a Mal'tsev term is ternary")
    _require_exhaustive(alg)
    n = alg.size
    if n == 0:
        return Verdict(True, detail="empty carrier")
    T = term_table(alg, p, 3)
    x, y = np.indices((n, n))
    bad = (T[x, x, y] != y) | (T[x, y, y] != x)
    if not bad.any():
        return Verdict(True)
    a, b = (int(v) for v in np.argwhere(bad)[0])
    assert eval_term(alg, p, (a, a, b)) != b or eval_term(alg, p, (a, b, b)) != a
    return Verdict(False, witness=(a, b), detail=f"p({a},{a},{b})={eval_term(alg, p, (a, a, b))}, "
                   f"p({a},{b},{b})={eval_term(alg, p, (a, b, b))}")


@dataclass(frozen=True)
class DayTermSequence:
    terms: tuple

    def __post_init__(self):
        terms = tuple(as_term(t) for t in self.terms)
        object.__setattr__(self, "terms", terms)
        if len(terms) < 2:
            raise ArityError("a Day sequence needs at least two terms (d >= 1)")
        for t in terms:
            if term_arity(t) > 4:
                raise ArityError(f"Day term {t} is not quaternary")

    @property
    def d(self):
        return len(self.terms) - 1

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    def __str__(self):
        return "<" + ", ".join(str(t) for t in self.terms) + ">"

    def to_json(self):
        return [str(t) for t in self.terms]


def derive_day_from_maltsev(p) -> DayTermSequence:
    """Day terms x, p(x, p(z,y,x), w), w for a Mal'tsev term p (d = 2)."""
    p = as_term(p)
    if term_arity(p) > 3:
        raise ArityError("a Mal'tsev term is ternary")
    x, y, z, w = Var(0), Var(1), Var(2), Var(3)
    inner = substitute(p, (z, y, x))
    return DayTermSequence((x, substitute(p, (x, inner, w)), w))


def _day_identities(d):
    """(name, index i, lhs term index, lhs variable pattern, rhs index or pattern)."""
    # Patterns map the free variables of the identity onto the four Day arguments.
    for i in range(d + 1):
        yield "D1", i, (0, 1, 1, 0), ("var", 0)
    yield "D2", 0, (0, 1, 2, 3), ("var", 0)
    yield "D3", d, (0, 1, 2, 3), ("var", 3)
    for i in range(0, d, 2):
        yield "D4", i, (0, 0, 1, 1), ("term", i + 1)
    for i in range(1, d, 2):
        yield "D5", i, (0, 1, 1, 2), ("term", i + 1)


def _identity_verdicts(alg, m):
    n = alg.size
    tables = [term_table(alg, t, 4) for t in m]
    for name, i, pattern, rhs in _day_identities(m.d):
        nvars = max(pattern) + 1
        grid = np.indices((n,) * nvars)
        args = tuple(grid[p] for p in pattern)
        left = tables[i][args]
        right = grid[rhs[1]] if rhs[0] == "var" else tables[rhs[1]][args]
        bad = left != right
        if not bad.any():
            yield name, i, Verdict(True)
            continue
        values = tuple(int(v) for v in np.argwhere(bad)[0])
        env = tuple(values[p] for p in pattern)
        lval = eval_term(alg, m[i], env)
        rval = values[rhs[1]] if rhs[0] == "var" else eval_term(alg, m[rhs[1]], env)
        assert lval != rval, "witness failed re-validation"
        yield name, i, Verdict(False, witness={"identity": name, "i": i, "values": values, "args": env},
                               detail=f"{name} fails for i={i} at {values}: {lval} != {rval}")


def _as_day(m):
    return m if isinstance(m, DayTermSequence) else DayTermSequence(tuple(m))


def verify_day(alg: FiniteAlgebra, m: DayTermSequence) -> Verdict:
    """Exhaustively check D1-D5.  The witness names the identity, i, and the failing values."""
    m = _as_day(m)
    _require_exhaustive(alg)
    if alg.size == 0:
        return Verdict(True, detail="empty carrier")
    for _, _, v in _identity_verdicts(alg, m):
        if not v:
            return v
    return Verdict(True)


def day_identity_report(alg: FiniteAlgebra, m: DayTermSequence):
    """One (identity, i, verdict) entry per instance of D1-D5."""
    m = _as_day(m)
    _require_exhaustive(alg)
    if alg.size == 0:
        return []
    return list(_identity_verdicts(alg, m))


def key_lemma_check(alg: FiniteAlgebra, m: DayTermSequence, gamma) -> Verdict:
    """For b γ d: a γ c iff m_i(a,a,c,c) γ m_i(a,b,d,c) for all i, over all 4-tuples."""
    from .relations import is_congruence

    m = _as_day(m)
    _require_exhaustive(alg)
    if not is_congruence(alg, gamma):
        raise HypothesisError("key lemma needs a congruence")
    n = alg.size
    if n == 0:
        return Verdict(True, detail="empty carrier")
    G = gamma.matrix()
    a, b, c, d = np.indices((n,) * 4)
    right = np.ones((n,) * 4, dtype=bool)
    for t in m:
        T = term_table(alg, t, 4)
        right &= G[T[a, a, c, c], T[a, b, d, c]]
    bad = G[b, d] & (G[a, c] != right)
    if not bad.any():
        return Verdict(True)
    tup = tuple(int(v) for v in np.argwhere(bad)[0])
    return Verdict(False, witness=tup, detail=f"key lemma fails at (a,b,c,d)={tup}")


def projection_day_sequences(max_d: int):
    """All Day candidates built from projections only, up to length max_d + 1."""
    variables = [Var(i) for i in range(4)]
    for d in range(1, max_d + 1):
        for middle in itertools.product(variables, repeat=d - 1):
            yield DayTermSequence((Var(0),) + middle + (Var(3),))
