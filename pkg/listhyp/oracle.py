# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Brute-force ground truth.

Independent of the closed forms being checked:
- list error by enumerating every list at every outcome (no top-L shortcut)
- Neyman-Pearson optima by enumerating all deterministic tests and taking the
  lower convex envelope of their (type-1, type-0) error pairs, which is
  exactly the region reachable by randomized tests
- exact rational arithmetic for spot values
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

import numpy as np

from listhyp.core.constants import (
    EXACT_MAX_L,
    EXACT_MAX_M,
    EXACT_MAX_OUTCOMES,
    ORACLE_MAX_MASS_POINTS,
    ORACLE_MAX_TESTS_LOG2,
)
from listhyp.core.errors import (
    BadBeta,
    EmptyAlphabet,
    NegativeMass,
    NotNormalized,
    TooLarge,
    ValidationError,
)
from listhyp.distributions import JointDistribution, check_list_size
from listhyp.neyman_pearson import MassPair

logger = logging.getLogger(__name__)

RationalEntry = Union[Tuple[int, int], Fraction, int, str]


@dataclass(frozen=True, order=True)
class EnvelopePoint:
    """(type-1 error, type-0 error) of a test."""

    eps1: float
    eps0: float


@dataclass(frozen=True)
class ExactSummary:
    """Minimum error, Q*, mu, lambda* and alpha at Q* as exact fractions."""

    eps_min: Fraction
    mu: Fraction
    q_star: Tuple[Fraction, ...]
    lambda_star: Fraction
    alpha_at_qstar: Fraction


def brute_min_error(P: JointDistribution, L: int) -> float:
    """1 - sum_y max over all lists S of sum_{x in S} P_XY(x, y)."""
    check_list_size(P.M, L)
    points = math.comb(P.M, L) * P.card_y
    if points > ORACLE_MAX_MASS_POINTS:
        raise TooLarge(f"{points} (list, outcome) points exceed the oracle cap {ORACLE_MAX_MASS_POINTS}")
    success = 0.0
    for y in range(P.card_y):
        column = P.p[:, y].tolist()
        success += max(sum(column[x] for x in combo) for combo in itertools.combinations(range(P.M), L))
    return 1.0 - success


def deterministic_points(pq: MassPair) -> Tuple[np.ndarray, np.ndarray]:
    """(eps1, eps0) of all 2^K deterministic tests, one per decide-0 subset."""
    if pq.size > ORACLE_MAX_TESTS_LOG2:
        raise TooLarge(f"support of {pq.size} atoms exceeds 2^{ORACLE_MAX_TESTS_LOG2} tests")
    q_sums = np.zeros(1)
    p_sums = np.zeros(1)
    for k in range(pq.size):
        q_sums = np.concatenate((q_sums, q_sums + pq.q[k]))
        p_sums = np.concatenate((p_sums, p_sums + pq.p[k]))
    eps0 = np.clip(float(np.sum(pq.p)) - p_sums, 0.0, 1.0)
    return np.clip(q_sums, 0.0, 1.0), eps0


def _cross(o: EnvelopePoint, a: EnvelopePoint, b: EnvelopePoint) -> float:
    return (a.eps1 - o.eps1) * (b.eps0 - o.eps0) - (a.eps0 - o.eps0) * (b.eps1 - o.eps1)


def lower_convex_envelope(points: Sequence[EnvelopePoint]) -> List[EnvelopePoint]:
    """Vertices of the non-increasing lower convex envelope, by increasing eps1.

    Points dominated by one with smaller eps1 and no larger eps0 are dropped
    first, then a monotone-chain lower hull runs over the remaining frontier.
    """
    frontier: List[EnvelopePoint] = []
    for point in sorted(points):
        if not frontier or point.eps0 < frontier[-1].eps0:
            frontier.append(point)

    hull: List[EnvelopePoint] = []
    for point in frontier:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], point) <= 0.0:
            hull.pop()
        hull.append(point)
    return hull


def _pareto_points(eps1: np.ndarray, eps0: np.ndarray) -> List[EnvelopePoint]:
    order = np.lexsort((eps0, eps1))
    eps1, eps0 = eps1[order], eps0[order]
    running = np.minimum.accumulate(eps0)
    keep = np.ones(eps0.size, dtype=bool)
    keep[1:] = eps0[1:] < running[:-1]
    return [EnvelopePoint(float(a), float(b)) for a, b in zip(eps1[keep], eps0[keep])]


def brute_alpha_beta(pq: MassPair, beta: float) -> float:
    """alpha_beta by exhaustive deterministic tests plus convex envelope."""
    if not (0.0 <= beta <= 1.0):
        raise BadBeta(f"beta={beta!r} must lie in [0, 1]")
    hull = lower_convex_envelope(_pareto_points(*deterministic_points(pq)))
    xs = np.array([pt.eps1 for pt in hull])
    ys = np.array([pt.eps0 for pt in hull])
    return float(np.interp(beta, xs, ys))


# ---------------------------------------------------------------------------
# Exact arithmetic
# ---------------------------------------------------------------------------


def _to_fraction(entry: RationalEntry) -> Fraction:
    if isinstance(entry, (tuple, list)):
        numerator, denominator = entry
        if int(denominator) <= 0:
            raise ValidationError(f"denominator must be positive in {tuple(entry)}")
        return Fraction(int(numerator), int(denominator))
    try:
        return Fraction(entry)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ValidationError(f"not a rational entry: {entry!r}") from e


def _rational_matrix(P_num: Sequence[Sequence[RationalEntry]], L: int) -> List[List[Fraction]]:
    matrix = [[_to_fraction(entry) for entry in row] for row in P_num]
    if not matrix or not matrix[0]:
        raise EmptyAlphabet("rational P_XY is empty")
    card_y = len(matrix[0])
    if any(len(row) != card_y for row in matrix):
        raise ValidationError("rational P_XY is not rectangular")
    M = len(matrix)
    if M > EXACT_MAX_M or L > EXACT_MAX_L or card_y > EXACT_MAX_OUTCOMES:
        raise TooLarge(
            f"exact mode supports M <= {EXACT_MAX_M}, L <= {EXACT_MAX_L}, |Y| <= {EXACT_MAX_OUTCOMES}"
        )
    check_list_size(M, L)
    if any(value < 0 for row in matrix for value in row):
        raise NegativeMass("rational P_XY has a negative entry")
    total = sum((value for row in matrix for value in row), Fraction(0))
    if total != 1:
        raise NotNormalized(f"rational P_XY sums to {total}, expected exactly 1")
    return matrix


def _exact_column_best(matrix: List[List[Fraction]], L: int) -> List[Fraction]:
    M = len(matrix)
    return [
        max(sum((matrix[x][y] for x in combo), Fraction(0)) for combo in itertools.combinations(range(M), L))
        for y in range(len(matrix[0]))
    ]


def exact_min_error_rational(P_num: Sequence[Sequence[RationalEntry]], L: int) -> Fraction:
    """Minimum list error in exact rational arithmetic.

    Entries are (numerator, denominator) pairs, Fractions, integers or
    strings such as "3/20".
    """
    matrix = _rational_matrix(P_num, L)
    return 1 - sum(_exact_column_best(matrix, L), Fraction(0))


def exact_list_summary(P_num: Sequence[Sequence[RationalEntry]], L: int) -> ExactSummary:
    """eps_min, mu, Q*, lambda* and alpha at Q* as exact fractions."""
    matrix = _rational_matrix(P_num, L)
    M = len(matrix)
    best = _exact_column_best(matrix, L)
    per_list = [value / math.comb(M - 1, L - 1) for value in best]
    mu = sum(per_list, Fraction(0))
    eps_min = 1 - sum(best, Fraction(0))
    return ExactSummary(
        eps_min=eps_min,
        mu=mu,
        q_star=tuple(value / mu for value in per_list),
        lambda_star=math.comb(M, L) * mu,
        alpha_at_qstar=1 - (1 - eps_min) / math.comb(M - 1, L - 1),
    )
