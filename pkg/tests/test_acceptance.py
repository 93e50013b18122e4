"""Exit criteria: one test per published claim, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines.
"""

import pytest

from qultimatum.verify import CHECKS, SuiteConfig

CONFIG = SuiteConfig(delta=0.7, delta_prime=0.8, money=1.0, seed=0)


@pytest.mark.parametrize("check", CHECKS, ids=[c.__name__.removeprefix("check_") for c in CHECKS])
def test_criterion(check):
    result = check(CONFIG)
    print(result.line())
    assert result.passed, result.detail


@pytest.mark.parametrize("seed", [1, 2])
def test_criteria_hold_for_other_seeds(seed):
    cfg = SuiteConfig(seed=seed)
    for check in CHECKS:
        result = check(cfg)
        assert result.passed, result.line()
