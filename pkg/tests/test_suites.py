import pytest

from kquant.constants import HBAR
from kquant.suites import SLOW_SUITES, SUITES, SuiteOptions, groenewold_suite, run_suites


@pytest.fixture()
def options(settings):
    return SuiteOptions(seed=5, samples=20_000, settings=settings)


def test_groenewold_suite(options):
    result = groenewold_suite(options)
    assert result.passed
    operator_side = result.checks[0]
    assert operator_side.detail == f"\N{MINUS SIGN}3{HBAR}² (i²-resolved)"


@pytest.mark.parametrize("name", ["chain-map", "maurer-cartan", "bracket"])
def test_fast_suites_pass(name, options):
    (result,) = run_suites([name], options)
    assert result.suite == name
    assert result.passed, [check for check in result.checks if not check.passed]
    assert all(check.cases > 0 for check in result.checks)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["dgla", "moyal"])
def test_long_suites_pass(name, options):
    (result,) = run_suites([name], options)
    assert result.passed, [check for check in result.checks if not check.passed]


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(SLOW_SUITES))
def test_monte_carlo_suites_pass(name, settings):
    (result,) = run_suites([name], SuiteOptions(seed=5, samples=200_000, settings=settings))
    assert result.passed, [check for check in result.checks if not check.passed]


def test_suites_are_seeded(options):
    first = run_suites(["chain-map"], options)
    again = run_suites(["chain-map"], options)
    assert first == again
    assert SLOW_SUITES <= set(SUITES)
