"""The four-row summary table for one finite algebra.

Rows Rel, Idl Rel and Idl Fil Rel are computed: each modular verdict comes
with the certificate from the lattice scan.  Row Fil Rel cannot be reproduced
on a finite carrier, where every filter is principal and compatible
uniformities are just principal filters of congruences; it carries a note
instead of a verdict.
"""

import json
from dataclasses import dataclass

from .base import SCHEMA
from .lattice import check_modular, congruence_lattice, lattice_of
from .superequiv import supeqv_lattice
from .uniform import RelFilter, is_compatible_uniformity, supunif_lattice

TABLE_CAP = 8

FIL_REL_NOTE = (
    "not reproducible at finite scale: on a finite carrier every filter is principal, so the compatible "
    "uniformities are the filters Fg{α} of congruences α and Unif A is isomorphic to Con A. Non-modularity "
    "needs an infinite chain C, for which Unif C is not modular (Weber, Example 2.4; Weber orders "
    "uniformities in reverse). The finite-scale lattice is scanned as evidence of the collapse only."
)


@dataclass
class TableRow:
    lattice: str
    algebraic: str
    notion: str
    modular: str
    certificate: dict = None
    note: str = ""

    def to_json(self):
        return {"lattice": self.lattice, "algebraic": self.algebraic, "notion": self.notion,
                "modular": self.modular, "certificate": self.certificate, "note": self.note}


@dataclass
class TableReport:
    algebra: str
    size: int
    rows: list

    def to_json(self):
        return {"schema": SCHEMA, "algebra": self.algebra, "size": self.size,
                "rows": [r.to_json() for r in self.rows]}

    def to_markdown(self):
        lines = [f"# Lattice table for {self.algebra} (|A| = {self.size})", "",
                 "| lattice | algebraic | compatible notion | modular | evidence |",
                 "|---|---|---|---|---|"]
        for r in self.rows:
            lines.append(f"| {r.lattice} | {r.algebraic} | {r.notion} | {r.modular} | {_evidence(r)} |")
        notes = [r for r in self.rows if r.note]
        if notes:
            lines.append("")
            for r in notes:
                lines.append(f"- {r.lattice}: {r.note}")
        return "\n".join(lines) + "\n"

    def dumps(self, fmt="json"):
        if fmt == "markdown":
            return self.to_markdown()
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def _evidence(r):
    c = r.certificate
    if c is None:
        return "none"
    if c.get("scope"):
        return f"{c['scope']}: {c['lattice_size']} elements, modular={'yes' if c['verdict'] else 'no'}"
    if c["verdict"]:
        return f"modular law scanned on all {c['lattice_size']} elements"
    return f"pentagon at indices {tuple(c['witness'])}"


def _row(name, notion, L):
    cert = check_modular(L)
    return TableRow(name, "yes (finite lattice)", notion, "yes" if cert.verdict else "no",
                    dict(cert.to_json(), lattice_size=len(L)))


def unif_lattice(alg):
    """Compatible uniformities of a finite algebra: principal filters of congruences, re-checked."""
    from .lattice import congruences
    unifs = [RelFilter([C]) for C in congruences(alg, cap=TABLE_CAP)]
    for U in unifs:
        if not is_compatible_uniformity(alg, U):
            raise AssertionError("a congruence filter failed the compatibility check")
    return lattice_of(unifs, lambda x, y: x <= y, name=f"Unif {alg.name}")


def table_report(alg, cap=TABLE_CAP) -> TableReport:
    rows = [
        _row("Rel", "congruence", congruence_lattice(alg, cap=cap)),
        _row("Idl Rel", "compatible superequivalence", supeqv_lattice(alg, cap=cap)),
    ]
    finite = check_modular(unif_lattice(alg))
    rows.append(TableRow("Fil Rel", "not reproducible at finite scale", "compatible uniformity",
                         "not reproducible at finite scale",
                         dict(finite.to_json(), lattice_size=finite.lattice_size, scope="finite collapse only"),
                         FIL_REL_NOTE))
    rows.append(_row("Idl Fil Rel", "compatible superuniformity", supunif_lattice(alg, cap=cap)))
    return TableReport(alg.name, alg.size, rows)
