"""Acceptance suite: one pass/fail line per criterion.

The criteria themselves live in :mod:`positivity_lab.acceptance` so that
``positivity-lab selftest`` runs exactly the same checks.
"""

import pytest

from positivity_lab import acceptance

ACCEPTANCE_LINES: list[str] = []


@pytest.mark.parametrize("criterion", acceptance.CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion, capsys):
    result = criterion()
    line = result.line()
    ACCEPTANCE_LINES.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert result.passed, line
