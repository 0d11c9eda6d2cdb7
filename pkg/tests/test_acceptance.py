"""The ten acceptance criteria at their stated tolerances and time budgets.

Each criterion prints one ``[PASS]``/``[FAIL]`` line; under pytest the lines
are collected and repeated in the terminal summary.  Run this file directly
to print the table without pytest.
"""

import sys

import pytest

from hnflow.acceptance import CRITERIA, run_criterion

LINES = {}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    result = run_criterion(number)
    LINES[number] = result.line()
    print(result.line())
    assert result.passed, result.detail


if __name__ == "__main__":
    results = [run_criterion(n) for n in sorted(CRITERIA)]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
