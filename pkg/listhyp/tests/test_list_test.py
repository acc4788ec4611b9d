# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Unit tests for optimal list testing.

Tests cover:
- min_error() spot values and analytic edge cases
- eps_min monotonicity in L
- optimal_list_test() maximizer sets and tie handling
- simulate() determinism and Monte Carlo consistency
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from listhyp.core.errors import BadListSize, ValidationError
from listhyp.distributions import HypothesisList, product_channel, validate_joint
from listhyp.list_test import min_error, optimal_list_test, simulate, top_l_column_sums


@pytest.mark.critical
class TestMinError:
    """Closed-form minimum list error."""

    def test_j3_l1(self, j3):
        assert min_error(j3, 1).eps_min == pytest.approx(0.3, abs=1e-12)

    def test_j3_l2(self, j3):
        report = min_error(j3, 2)
        assert report.eps_min == pytest.approx(0.15, abs=1e-12)
        assert_allclose(report.per_y_max, [0.125, 0.125, 0.175], atol=1e-15)
        assert report.success_mass == pytest.approx(0.425, abs=1e-15)

    def test_full_list_has_no_error(self, j3):
        assert min_error(j3, 3).eps_min == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("M,card_y,L", [(4, 3, 1), (4, 3, 2), (5, 2, 3)])
    def test_uninformative_instance(self, M, card_y, L):
        prior = np.full(M, 1.0 / M)
        y_marginal = np.linspace(1.0, 2.0, card_y)
        y_marginal /= y_marginal.sum()
        P = validate_joint(np.outer(prior, y_marginal))
        assert min_error(P, L).eps_min == pytest.approx(1.0 - L / M, abs=1e-12)

    def test_bsc_two_uses(self):
        P = product_channel([0.5, 0.5], [[0.9, 0.1], [0.1, 0.9]], 2)
        assert min_error(P, 1).eps_min == pytest.approx(0.1, abs=1e-12)

    def test_bad_list_size(self, j3):
        with pytest.raises(BadListSize):
            min_error(j3, 0)

    def test_top_l_sums(self, j3):
        assert_allclose(top_l_column_sums(j3, 2), [0.25, 0.25, 0.35])


class TestMonotonicity:
    """eps_min is non-increasing in L."""

    def test_suite(self, instances_200):
        for P, _ in instances_200:
            errors = [min_error(P, L).eps_min for L in range(1, P.M + 1)]
            assert all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))
            assert errors[-1] == pytest.approx(0.0, abs=1e-12)


class TestOptimalListTest:
    """Tests for optimal_list_test()."""

    def test_j3_maximizers(self, j3):
        test = optimal_list_test(j3, 2)
        assert test.sets[0] == (HypothesisList.of([0, 1]), HypothesisList.of([0, 2]))
        assert test.sets[1] == (HypothesisList.of([0, 1]), HypothesisList.of([1, 2]))
        assert test.sets[2] == (HypothesisList.of([0, 2]), HypothesisList.of([1, 2]))
        assert test.weights(0) == (0.5, 0.5)

    def test_zero_column_gets_first_list(self):
        P = validate_joint([[0.5, 0.0], [0.5, 0.0]])
        test = optimal_list_test(P, 1)
        assert test.sets[1] == (HypothesisList.of([0]),)


class TestSimulate:
    """Tests for simulate()."""

    def test_deterministic(self, j3):
        test = optimal_list_test(j3, 2)
        assert simulate(j3, test, 10_000, seed=5) == simulate(j3, test, 10_000, seed=5)

    def test_noiseless_instance(self):
        P = validate_joint([[0.3, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.2]])
        assert simulate(P, optimal_list_test(P, 1), 50_000, seed=1) == 0.0

    def test_rejects_bad_arguments(self, j3):
        test = optimal_list_test(j3, 2)
        with pytest.raises(ValidationError):
            simulate(j3, test, 0, seed=1)
        with pytest.raises(ValidationError):
            simulate(validate_joint([[0.5, 0.5]]), test, 10, seed=1)

    @pytest.mark.slow
    def test_monte_carlo_matches_closed_form(self, j3):
        test = optimal_list_test(j3, 2)
        misses = sum(
            abs(simulate(j3, test, 1_000_000, seed=seed) - 0.15) > 0.00107 for seed in range(5)
        )
        assert misses <= 1
