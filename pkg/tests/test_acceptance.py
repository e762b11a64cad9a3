"""One test per acceptance criterion, each held to its time limit.

A PASS/FAIL line per criterion is printed in the terminal summary, and by
running this file directly.
"""

import pytest

from supalg.suite import CRITERIA, RunConfig, run_criterion

CONFIG = RunConfig(seed=42)
LINES = {}


def line(r):
    status = "PASS" if r.passed else "FAIL"
    why = "" if r.holds else f"  {r.message}"
    late = "" if r.in_time else "  (over the time limit)"
    return f"[{status}] {r.number:2d} {r.name}: {r.seconds:.2f} s, limit {r.limit:.0f} s{why}{late}"


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(number):
    r = run_criterion(number, CONFIG)
    LINES[number] = line(r)
    print(LINES[number])
    assert r.holds, f"{r.message}: {r.counterexample}"
    assert r.in_time, f"took {r.seconds:.2f} s, limit {r.limit} s"


if __name__ == "__main__":
    results = [run_criterion(c[0], CONFIG) for c in CRITERIA]
    for r in results:
        print(line(r))
    raise SystemExit(0 if all(r.passed for r in results) else 1)
