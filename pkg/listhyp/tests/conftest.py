"""
Root pytest configuration for listhyp tests.

Registers custom markers and provides shared fixtures.
"""

import json
from typing import List, Tuple

import pytest

from listhyp.distributions import JointDistribution, validate_joint
from listhyp.tests.factories import J3_MATRIX, suite_instances


def pytest_configure(config):
    """Register custom markers to avoid 'Unknown mark' warnings."""
    config.addinivalue_line(
        "markers",
        "critical: marks tests as critical (closed-form spot values that should always pass)",
    )
    config.addinivalue_line(
        "markers",
        "slow: Monte Carlo runs and the 200-instance suites",
    )


# ============================================================================
# Shared Fixtures
# ============================================================================


@pytest.fixture
def j3() -> JointDistribution:
    """Three hypotheses, three outcomes, diagonal-heavy."""
    return validate_joint(J3_MATRIX)


@pytest.fixture
def j3_instance_file(tmp_path):
    """J3 at L=2 written in the JSON instance schema."""
    path = tmp_path / "j3.json"
    path.write_text(
        json.dumps({"M": 3, "L": 2, "outcome_labels": ["a", "b", "c"], "P_XY": J3_MATRIX}),
        encoding="utf-8",
    )
    return path


@pytest.fixture(scope="session")
def instances_200() -> List[Tuple[JointDistribution, int]]:
    """The 200 seeded instances shared by the identity suites."""
    return suite_instances(200)
