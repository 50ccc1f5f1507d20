"""Acceptance gate: one check per criterion, each printed as a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` to see the report.
"""

import pytest

from complexaction import validation

CHECKS = [
    ("1", validation.check_quadratic_exactness),
    ("2", validation.check_dpm_ground_state),
    ("3", validation.check_dpm_equivalence),
    ("4", validation.check_fig2),
    ("5", validation.check_fig3),
    ("6", validation.check_spectral),
    ("7", validation.check_leibniz),
    ("8", validation.check_root_search),
]


@pytest.mark.parametrize("number,check", CHECKS, ids=[f"criterion-{n}" for n, _ in CHECKS])
def test_criterion(number, check):
    result = check()
    print(f"\nCRITERION {number} {result.line()}")
    assert result.passed, result.summary
