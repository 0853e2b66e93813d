"""Acceptance gate: every criterion at its stated tolerance.

Each test runs one numbered criterion from `zbwsim.suites` and prints one
pass/fail line (visible with `pytest -s` or in captured output on failure).
The same checks back `zbwsim verify all`.
"""
import pytest

from zbwsim.suites import CRITERIA, run_criterion


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    title, _ = CRITERIA[number]
    checks = run_criterion(number)
    assert checks, f"criterion {number} produced no checks"
    ok = all(c.passed for c in checks)
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE criterion {number:02d} ({title}): {status} "
          f"[{len(checks)} checks]")
    for c in checks:
        mark = "ok " if c.passed else "BAD"
        print(f"    {mark} {c.name}: value={c.value:.3e} "
              f"tolerance={c.tolerance:.3e} {c.detail}")
    failed = [c.name for c in checks if not c.passed]
    assert not failed, f"criterion {number} failed: {failed}"
