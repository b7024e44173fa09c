"""Acceptance gate: each criterion below must pass within its time budget.

Every test emits one verdict line; the terminal summary repeats them after
the run.
"""
import pytest

from subdiff import checks

import conftest


@pytest.fixture(scope="module")
def fixture_set(fixtures_dir):
    return checks.load_fixtures(fixtures_dir)


def _verdict(result):
    status = "PASS" if (result.ok and result.within_budget) else "FAIL"
    line = "[criterion %d] %s (%.2fs of %.0fs) %s" % (
        result.number, status, result.elapsed, result.budget, result.detail)
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert result.ok, result.detail
    assert result.within_budget, "budget exceeded: %.2fs > %.0fs" % (
        result.elapsed, result.budget)


def test_criterion_1_subset_family(fixture_set):
    _verdict(checks.check_d_family(fixture_set))


def test_criterion_2_min_max_outer_limit(fixture_set):
    _verdict(checks.check_minmax_outer(fixture_set))


def test_criterion_3_quadratic_strict_inclusion(fixture_set):
    _verdict(checks.check_quadmax(fixture_set))


def test_criterion_4_degenerate_smooth_min(fixture_set):
    _verdict(checks.check_paraboloids(fixture_set))


def test_criterion_5_ball_support_arcs(fixture_set):
    _verdict(checks.check_disks(fixture_set))


def test_criterion_6_identity_on_random_instances(fixture_set):
    _verdict(checks.check_identity_random(fixture_set))


def test_criterion_7_error_bound_inequality(fixture_set):
    _verdict(checks.check_error_bound(fixture_set))


def test_criterion_8_property_suites(fixture_set):
    _verdict(checks.check_properties(fixture_set))
