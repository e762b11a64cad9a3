"""Command-line workbench.

Exit codes: 0 success, 1 a mathematical check failed, 2 bad input.  Output is
JSON (default) or markdown, to stdout or ``--out``; only JUnit files carry
timings, so every other output is reproducible from its inputs and seed.
"""

import functools
import itertools
import json
import sys

import click
import numpy as np

from . import __version__
from .algebra import DayTermSequence, day_identity_report, derive_day_from_maltsev, parse_term
from .base import SCHEMA, SupalgError, _jsonable
from .fixtures import REGISTRY, day_terms, resolve_algebra
from .lattice import check_distributive, check_modular, congruence_lattice
from .relations import Relation, random_tolerance_seed, relation_from_json

FAIL, BAD_INPUT = 1, 2


def _render_markdown(data, title):
    lines = [f"# {title}", ""]
    for key, value in data.items():
        if key == "schema":
            continue
        if isinstance(value, (dict, list)):
            lines += [f"## {key}", "", "```json", json.dumps(value, indent=2, sort_keys=True), "```", ""]
        else:
            lines.append(f"- {key}: {value}")
    return "\n".join(lines).rstrip() + "\n"


def _write(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def emit(ctx, data, title, markdown=None):
    data = {"schema": SCHEMA, **_jsonable(data)}
    if ctx.obj["format"] == "markdown":
        text = markdown if markdown is not None else _render_markdown(data, title)
    else:
        text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    _write(text, ctx.obj["out"])


_SHARED = [
    click.option("--format", "fmt", type=click.Choice(["json", "markdown"]), default=None),
    click.option("--out", type=click.Path(dir_okay=False), default=None),
    click.option("--seed", type=int, default=None),
    click.option("--depth", type=click.IntRange(1, 5), default=None),
    click.option("--max-carrier", type=click.IntRange(0, 12), default=None),
]


def command(fn):
    """Accept the shared flags after the subcommand too, and map library errors onto exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        shared = {"format": kwargs.pop("fmt"), "out": kwargs.pop("out"), "seed": kwargs.pop("seed"),
                  "depth": kwargs.pop("depth"), "max_carrier": kwargs.pop("max_carrier")}
        ctx.obj.update({k: v for k, v in shared.items() if v is not None})
        try:
            ok = fn(*args, **kwargs)
        except (SupalgError, json.JSONDecodeError, OSError, KeyError, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(BAD_INPUT)
        sys.exit(0 if ok is not False else FAIL)

    for option in reversed(_SHARED):
        wrapper = option(wrapper)
    return wrapper


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _relation(path):
    return relation_from_json(_load_json(path))


def _algebra(ctx, spec):
    fixtures = ctx.obj["fixtures"]
    alg = resolve_algebra(fixtures.get(spec, spec))
    if alg.size > ctx.obj["max_carrier"]:
        raise SupalgError(f"{alg.name} has {alg.size} elements, above --max-carrier {ctx.obj['max_carrier']}")
    return alg


def _day(spec, terms):
    if terms:
        return DayTermSequence(tuple(parse_term(t) for t in terms))
    if spec in REGISTRY:
        m = day_terms(spec)
        if m is not None:
            return m
    raise SupalgError("no Day terms known for this algebra; pass --terms")


def _fixture_map(pairs):
    out = {}
    for item in pairs:
        name, sep, path = item.partition("=")
        if not sep or not name or not path:
            raise click.BadParameter(f"expected NAME=FILE, got {item!r}", param_hint="--fixture")
        out[name] = path
    return out


algebra_option = click.option("--algebra", "-a", required=True, help="Bundled fixture name or algebra JSON file.")


@click.group()
@click.version_option(__version__)
@click.option("--format", "fmt", type=click.Choice(["json", "markdown"]), default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="Write the report here instead of stdout.")
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--depth", type=click.IntRange(1, 5), default=3, show_default=True, help="Weber bracket depth.")
@click.option("--max-carrier", type=click.IntRange(0, 12), default=8, show_default=True)
@click.option("--fixture", "fixtures", multiple=True, metavar="NAME=FILE",
              help="Replace a bundled fixture by an algebra file.")
@click.pass_context
def main(ctx, fmt, out, seed, depth, max_carrier, fixtures):
    """Universal-algebra workbench for superequivalences and superuniformities."""
    ctx.ensure_object(dict)
    ctx.obj.update(format=fmt, out=out, seed=seed, depth=depth, max_carrier=max_carrier,
                   fixtures=_fixture_map(fixtures))


@main.command("verify-day")
@algebra_option
@click.option("--terms", multiple=True, help="Day terms m_0 .. m_d as s-expressions, in order.")
@click.option("--maltsev", help="Derive the Day terms from this Mal'tsev term.")
@click.pass_context
@command
def verify_day_cmd(ctx, algebra, terms, maltsev):
    """Check D1-D5 identity by identity."""
    alg = _algebra(ctx, algebra)
    m = derive_day_from_maltsev(parse_term(maltsev)) if maltsev else _day(algebra, terms)
    rows = [{"identity": name, "i": i, "holds": v.holds, "witness": v.witness, "detail": v.detail}
            for name, i, v in day_identity_report(alg, m)]
    ok = all(r["holds"] for r in rows)
    emit(ctx, {"algebra": alg.name, "terms": m.to_json(), "holds": ok, "identities": rows}, "Day identities")
    return ok


@main.command("table-report")
@algebra_option
@click.pass_context
@command
def table_report_cmd(ctx, algebra):
    """The four-row lattice table with certificates."""
    from .report import table_report
    alg = _algebra(ctx, algebra)
    rep = table_report(alg, cap=ctx.obj["max_carrier"])
    emit(ctx, rep.to_json(), "Lattice table", markdown=rep.to_markdown())


@main.command("suite")
@click.option("--only", type=click.IntRange(1, 11), multiple=True, help="Run only these criteria.")
@click.option("--jobs", type=click.IntRange(1, 64), default=1, show_default=True, help="Worker processes.")
@click.option("--junit", type=click.Path(dir_okay=False), help="Also write a JUnit XML summary with timings.")
@click.option("--fixture", "fixtures", multiple=True, metavar="NAME=FILE",
              help="Replace a bundled fixture by an algebra file.")
@click.pass_context
@command
def suite_cmd(ctx, only, jobs, junit, fixtures):
    """Run the acceptance properties with the seeded generator."""
    from .suite import RunConfig, run_suite, suite_json, suite_junit
    ctx.obj["fixtures"].update(_fixture_map(fixtures))
    cfg = RunConfig(seed=ctx.obj["seed"], weber_depth=ctx.obj["depth"], fixtures=ctx.obj["fixtures"])
    results = run_suite(cfg, only=set(only) or None, jobs=jobs)
    data = suite_json(results, cfg)
    lines = ["# Suite", "", "| # | criterion | holds |", "|---|---|---|"]
    lines += [f"| {r.number} | {r.name} | {'yes' if r.holds else 'NO: ' + r.message} |" for r in results]
    emit(ctx, data, "Suite", markdown="\n".join(lines) + "\n")
    if junit:
        with open(junit, "w") as fh:
            fh.write(suite_junit(results) + "\n")
    return data["all_hold"]


def _lattice_report(ctx, L):
    mod, dist = check_modular(L), check_distributive(L)
    emit(ctx, {"lattice": L.to_json(), "size": len(L), "modular": mod.to_json(), "distributive": dist.to_json()},
         L.name)


@main.command("con-lattice")
@algebra_option
@click.pass_context
@command
def con_lattice_cmd(ctx, algebra):
    """Congruence lattice with modularity and distributivity certificates."""
    _lattice_report(ctx, congruence_lattice(_algebra(ctx, algebra), cap=ctx.obj["max_carrier"]))


@main.command("supeqv-lattice")
@algebra_option
@click.pass_context
@command
def supeqv_lattice_cmd(ctx, algebra):
    """Lattice of compatible superequivalences."""
    from .superequiv import supeqv_lattice
    _lattice_report(ctx, supeqv_lattice(_algebra(ctx, algebra), cap=ctx.obj["max_carrier"]))


@main.command("supunif-lattice")
@algebra_option
@click.pass_context
@command
def supunif_lattice_cmd(ctx, algebra):
    """Lattice of compatible superuniformities."""
    from .uniform import supunif_lattice
    _lattice_report(ctx, supunif_lattice(_algebra(ctx, algebra), cap=ctx.obj["max_carrier"]))


@main.command("modularity")
@algebra_option
@click.option("--kind", type=click.Choice(["con", "supeqv", "supunif"]), default="supeqv", show_default=True)
@click.option("--chain", "chain", nargs=3, type=click.Path(exists=True, dir_okay=False),
              help="Three ideal JSON files I, I', I'' (I <= I''): run the modularity chain on them.")
@click.pass_context
@command
def modularity_cmd(ctx, algebra, kind, chain):
    """Modular law for a whole lattice, or the proof chain for one triple."""
    from .superequiv import RelIdeal, SuperEquivalence, modularity_chain, supeqv_lattice
    from .uniform import supunif_lattice
    alg = _algebra(ctx, algebra)
    if chain:
        I, Ip, Ipp = (SuperEquivalence(RelIdeal.from_json(_load_json(p))) for p in chain)
        v = modularity_chain(alg, _day(algebra, ()), I, Ip, Ipp)
        emit(ctx, {"algebra": alg.name, "holds": v.holds, "witness": v.witness, "detail": v.detail,
                   "stabilized_at": v.extra.get("stabilized_at"), "degenerate": v.extra.get("degenerate"),
                   "trace": v.extra.get("trace")}, "Modularity chain")
        return v.holds
    build = {"con": congruence_lattice, "supeqv": supeqv_lattice, "supunif": supunif_lattice}[kind]
    L = build(alg, cap=ctx.obj["max_carrier"])
    cert = check_modular(L)
    emit(ctx, {"algebra": alg.name, "kind": kind, "size": len(L), "certificate": cert.to_json()}, "Modularity")
    return cert.verdict


@main.command("shifting-witness")
@algebra_option
@click.option("--relations", "rels", nargs=3, type=click.Path(exists=True, dir_okay=False),
              help="Relation JSON files R, F, X; drawn from --seed when omitted.")
@click.option("--filters", is_flag=True, help="Use the superuniformity version on Fg{R}, Fg{F}, Fg{X}.")
@click.option("--terms", multiple=True, help="Day terms, if the algebra is not bundled.")
@click.pass_context
@command
def shifting_cmd(ctx, algebra, rels, filters, terms):
    """Build W and Y and check (R o X o R) ^ F <= Y."""
    from .superequiv import shifting_witness
    from .uniform import RelFilter, su_shifting_witness
    alg = _algebra(ctx, algebra)
    m = _day(algebra, terms)
    if rels:
        R, F, X = (_relation(p) for p in rels)
    else:
        rng = np.random.default_rng(ctx.obj["seed"])
        R, F, X = (random_tolerance_seed(alg.size, rng) for _ in range(3))
    if filters:
        W, Y, v = su_shifting_witness(alg, m, *(RelFilter([S]) for S in (R, F, X)))
    else:
        W, Y, v = shifting_witness(alg, m, R, F, X)
    emit(ctx, {"algebra": alg.name, "version": "superuniformity" if filters else "superequivalence",
               "R": R, "F": F, "X": X, "W": W, "Y": Y, "holds": v.holds, "witness": v.witness}, "Shifting lemma")
    return v.holds


@main.command("weber")
@click.option("--relations", "rels", type=click.Path(exists=True, dir_okay=False),
              help="JSON list of relations U_1 .. U_N; a constant random sequence when omitted.")
@click.option("--carrier", type=click.IntRange(1, 6), default=4, show_default=True)
@click.pass_context
@command
def weber_cmd(ctx, rels, carrier):
    """Truncated Weber bracket, compared with the exact generated uniformity."""
    from .uniform import RelFilter, ug_of_semiuniformity, weber_bracket
    depth = ctx.obj["depth"]
    if rels:
        seq = [relation_from_json(r) for r in _load_json(rels)]
    else:
        rng = np.random.default_rng(ctx.obj["seed"])
        seq = [random_tolerance_seed(carrier, rng, 0.2)] * depth
    brackets = [weber_bracket(seq, d) for d in range(1, depth + 1)]
    monotone = all(a <= b for a, b in zip(brackets, brackets[1:]))
    out = {"depth": depth, "sequence": seq, "brackets": brackets, "monotone": monotone}
    ok = monotone
    if all(S == seq[0] for S in seq) and seq[0].is_reflexive() and seq[0].is_symmetric():
        res = ug_of_semiuniformity(RelFilter([seq[0]]), depth)
        out["exact_ug"] = res.exact.minimum
        out["contained_in_ug"] = res.verdict.holds
        ok = ok and res.verdict.holds
    emit(ctx, out, "Weber bracket")
    return ok


@main.command("permutes")
@algebra_option
@click.option("--pair", nargs=2, type=click.Path(exists=True, dir_okay=False),
              help="Two equivalence-relation JSON files; all congruence pairs when omitted.")
@click.pass_context
@command
def permutes_cmd(ctx, algebra, pair):
    """Permutability and the join-equals-composition iff, for ideals and for filters."""
    from .lattice import congruences
    from .superequiv import SuperEquivalence, is_compatible_superequivalence, se_join_is_composition
    from .uniform import RelFilter, unif_permutes
    alg = _algebra(ctx, algebra)
    if pair:
        rels = [_relation(p) for p in pair]
        for R in rels:
            if not R.is_equivalence():
                raise SupalgError("permutes takes equivalence relations (superequivalence ceilings)")
        pairs = [tuple(rels)]
    else:
        cons = congruences(alg, cap=ctx.obj["max_carrier"])
        pairs = list(itertools.combinations(cons, 2))
    rows = []
    ok = True
    for A, B in pairs:
        I, J = SuperEquivalence.of(A), SuperEquivalence.of(B)
        compatible = bool(is_compatible_superequivalence(alg, I)) and bool(is_compatible_superequivalence(alg, J))
        se, un = se_join_is_composition(I, J), unif_permutes(RelFilter([A]), RelFilter([B]))
        ok = ok and se.holds and un.holds
        rows.append({"first": A, "second": B, "compatible": compatible, "superequivalence": se.extra,
                     "uniformity": {k: v for k, v in un.extra.items()}, "iff_holds": se.holds and un.holds})
    emit(ctx, {"algebra": alg.name, "pairs": rows, "all_permute": all(r["superequivalence"]["permutes"]
                                                                      for r in rows)}, "Permutability")
    return ok


@main.command("exponential")
@click.option("--b", "b", type=click.Choice(["full", "discrete"]), required=True)
@click.option("--c", "c", type=click.Choice(["full", "discrete"]), required=True)
@click.option("--literal", is_flag=True, help="Use every map b -> c as a point.")
@click.pass_context
@command
def exponential_cmd(ctx, b, c, literal):
    """The exponential of two 2-point spaces and its adjunction check."""
    from .superequiv import SuperEquivalence, exponential_se
    space = {"full": Relation.full(2), "discrete": Relation.delta(2)}
    E, points, v = exponential_se(SuperEquivalence.of(space[b]), SuperEquivalence.of(space[c]), literal=literal)
    emit(ctx, {"b": b, "c": c, "literal": literal, "points": [list(p) for p in points], "ideal": E.ideal,
               "holds": v.holds, "witness": v.witness, "detail": v.detail, "counts": v.extra.get("counts")},
         "Exponential")
    return v.holds


if __name__ == "__main__":
    main()
