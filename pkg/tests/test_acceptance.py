"""Acceptance suite: one test per criterion, each printing a pass/fail line."""

import pytest

from eightvertex import checks


@pytest.mark.parametrize("check", checks.ALL, ids=lambda f: f.__name__)
def test_criterion(check):
    crit = check()
    worst = crit.worst()
    rel = ">" if worst.expect_above else "<"
    status = "PASS" if crit.passed else "FAIL"
    print(f"\ncriterion {crit.number}: {status}  {crit.title}  [{worst.identity}: {worst.value:.2e} {rel} {worst.tol:g}]")
    failing = [r.identity for r in crit.residuals if not r.passed]
    assert crit.passed, f"criterion {crit.number} failing: {failing}"


def test_summary(capsys):
    results = checks.run_all()
    with capsys.disabled():
        print()
        for c in results:
            print(f"criterion {c.number}: {'PASS' if c.passed else 'FAIL'}")
    assert [c.number for c in results] == list(range(1, 12))
