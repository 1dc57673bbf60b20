import pytest

from alexandroff.checks import MODULES, run_suite


@pytest.mark.parametrize("module", MODULES)
def test_suite_passes(module):
    results = run_suite(module, seed=0)
    assert results
    failed = [r.line() for r in results if not r.ok]
    assert not failed, failed


def test_suite_is_deterministic():
    a = [r.line() for r in run_suite("bar", seed=7)]
    b = [r.line() for r in run_suite("bar", seed=7)]
    assert a == b
