# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Meta-converse and information-spectrum characterizations of the list error.

Both bounds come from the binary test between the induced list distribution
P_X̲Y and the product Q_X̲ x Q_Y of the uniform list prior and an auxiliary
output distribution, at type-1 error 1/C(M, L). Both are tight at

    Q*_Y(y) = max_S P_X̲Y(S, y) / mu,    mu = sum_y max_S P_X̲Y(S, y),

with likelihood-ratio threshold lambda* = C(M, L) * mu.

The strict-improvement construction shows that a Q_Y with a zero at an
outcome shared by two or more lists is never optimal.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from listhyp.core.constants import IDENTITY_TOL, NORMALIZATION_TOL, RATIO_REL_TOL, THRESHOLD_CHECK_TOL
from listhyp.core.errors import BadLambda, DegenerateInstance, PreconditionFailed, ValidationError
from listhyp.distributions import (
    HypothesisList,
    JointDistribution,
    ListJointDistribution,
    OutputDistribution,
    build_list_joint,
    check_list_size,
    list_prior,
)
from listhyp.list_test import min_error
from listhyp.neyman_pearson import MassPair, alpha_beta, beta_alpha, mass_pair, ratio_classes

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetaConverseResult:
    """Meta-converse bound for one auxiliary Q_Y.

    ``identity_gap`` is eps_min - lower_bound_eps; it vanishes at Q*_Y.
    """

    q_y: OutputDistribution
    alpha_value: float
    lower_bound_eps: float
    identity_gap: float


@dataclass(frozen=True)
class InfoSpectrumResult:
    q_y: OutputDistribution
    lambda_opt: float
    sup_value: float
    lower_bound_eps: float


@dataclass(frozen=True)
class Lemma2Record:
    """Outcome of the strict-improvement construction at outcome ``y_bar``."""

    y_bar: int
    x_bar: HypothesisList
    q_hat: OutputDistribution
    mu: float
    lambda_star: float
    eps1_hat: float
    eps0_before: float
    eps0_after: float
    threshold_cases_ok: Tuple[bool, bool, bool]
    alpha_before: float
    alpha_after: float


def _check_alphabet(P: JointDistribution, q_y: OutputDistribution) -> None:
    if q_y.card_y != P.card_y:
        raise ValidationError(f"Q_Y has {q_y.card_y} outcomes, instance has {P.card_y}")


def _bound_from_success(success: float, M: int, L: int) -> float:
    """Lower bound on eps from a bound on the normalized success term."""
    return 1.0 - math.comb(M - 1, L - 1) * (1.0 - success)


def list_mass_pair(
    P: JointDistribution,
    L: int,
    q_y: OutputDistribution,
    PL: Optional[ListJointDistribution] = None,
) -> MassPair:
    """The binary problem P_X̲Y vs Q_X̲ x Q_Y, atoms are (list rank, outcome)."""
    _check_alphabet(P, q_y)
    if PL is None:
        PL = build_list_joint(P, L)
    n_lists = PL.n_lists
    q_grid = np.broadcast_to(q_y.q * list_prior(P.M, L).mass, (n_lists, PL.card_y))
    atoms = [(r, y) for r in range(n_lists) for y in range(PL.card_y)]
    return mass_pair(PL.p_list.ravel(), q_grid.ravel(), atoms)


def qstar(PL: ListJointDistribution) -> Tuple[OutputDistribution, float]:
    """Optimal auxiliary output distribution and its normalizer mu."""
    column_max = PL.column_max()
    mu = float(np.sum(column_max))
    if not mu > 0.0:
        raise DegenerateInstance("list distribution has no mass")
    q = column_max / mu
    q.setflags(write=False)
    return OutputDistribution(q=q), mu


def lambda_star(PL: ListJointDistribution) -> float:
    """lambda* = C(M, L) * mu, cross-checked against (M / L) * (1 - eps_min)."""
    _, mu = qstar(PL)
    value = math.comb(PL.M, PL.L) * mu
    eps_min = 1.0 - math.comb(PL.M - 1, PL.L - 1) * mu
    via_error = (PL.M / PL.L) * (1.0 - eps_min)
    if abs(value - via_error) > IDENTITY_TOL * max(1.0, value):
        logger.warning("lambda* disagrees with (M/L)(1 - eps): %r vs %r", value, via_error)
    return value


def meta_converse_bound(P: JointDistribution, L: int, q_y: OutputDistribution) -> MetaConverseResult:
    """alpha at type-1 error 1/C(M, L) and the implied lower bound on eps_min."""
    check_list_size(P.M, L)
    pq = list_mass_pair(P, L, q_y)
    alpha = alpha_beta(pq, list_prior(P.M, L).mass).value
    lower = _bound_from_success(alpha, P.M, L)
    eps = min_error(P, L).eps_min
    return MetaConverseResult(
        q_y=q_y,
        alpha_value=alpha,
        lower_bound_eps=lower,
        identity_gap=eps - lower,
    )


def corollary_beta(P: JointDistribution, L: int, q_y: OutputDistribution) -> float:
    """beta at type-0 error 1 - (1 - eps_min) / C(M-1, L-1); at most 1/C(M, L)."""
    check_list_size(P.M, L)
    eps = min_error(P, L).eps_min
    alpha = 1.0 - (1.0 - eps) / math.comb(P.M - 1, L - 1)
    pq = list_mass_pair(P, L, q_y)
    return beta_alpha(pq, min(max(alpha, 0.0), 1.0)).value


def _tail_profile(pq: MassPair) -> List[Tuple[float, float]]:
    """(lambda, P[ratio <= lambda]) for lambda = 0 and every finite ratio class."""
    p_total = float(np.sum(pq.p))
    p_above = 0.0
    profile = [(0.0, 0.0)]
    for cls in ratio_classes(pq):
        if not math.isinf(cls.ratio):
            profile.append((cls.ratio, p_total - p_above))
        p_above += cls.p_mass
    return profile


def info_spectrum_bound(P: JointDistribution, L: int, q_y: OutputDistribution, lam: float) -> float:
    """Lower bound on eps_min from P[ratio <= lambda] - lambda / C(M, L)."""
    if not lam >= 0.0:
        raise BadLambda(f"lambda={lam!r} must be non-negative")
    check_list_size(P.M, L)
    pq = list_mass_pair(P, L, q_y)
    below = float(np.sum(pq.p[pq.ratio <= lam * (1.0 + RATIO_REL_TOL)]))
    tail = below - lam * list_prior(P.M, L).mass
    return _bound_from_success(tail, P.M, L)


def info_spectrum_sup(P: JointDistribution, L: int, q_y: OutputDistribution) -> InfoSpectrumResult:
    """Best information-spectrum bound over lambda.

    The objective is right-continuous and decreasing between realized ratios,
    so scanning {0} and the finite ratios is exact. Near-ties go to the
    largest lambda.
    """
    check_list_size(P.M, L)
    prior_mass = list_prior(P.M, L).mass
    pq = list_mass_pair(P, L, q_y)
    values = [(lam, below - lam * prior_mass) for lam, below in _tail_profile(pq)]
    best = max(value for _, value in values)
    lambda_opt = max(lam for lam, value in values if value >= best - IDENTITY_TOL)
    return InfoSpectrumResult(
        q_y=q_y,
        lambda_opt=lambda_opt,
        sup_value=best,
        lower_bound_eps=_bound_from_success(best, P.M, L),
    )


# ---------------------------------------------------------------------------
# Strict improvement of a Q_Y with a zero
# ---------------------------------------------------------------------------


def _lemma2_conditions(PL: ListJointDistribution, q_y: OutputDistribution, y: int) -> Optional[str]:
    """None if outcome y admits the construction, otherwise the reason."""
    if q_y.q[y] > 0.0:
        return f"Q_Y({y}) = {float(q_y.q[y])!r} is not zero"
    positive = int(np.count_nonzero(PL.p_list[:, y] > 0.0))
    if positive < 2:
        return f"only {positive} list(s) have positive mass at outcome {y}"
    return None


def find_lemma2_outcome(P: JointDistribution, L: int, q_y: OutputDistribution) -> int:
    """First outcome where Q_Y vanishes and at least two lists have mass."""
    _check_alphabet(P, q_y)
    PL = build_list_joint(P, L)
    for y in range(P.card_y):
        if _lemma2_conditions(PL, q_y, y) is None:
            return y
    raise PreconditionFailed("no outcome satisfies both improvement conditions")


def lemma2_improve(
    P: JointDistribution,
    L: int,
    q_y: OutputDistribution,
    y_bar: Optional[int] = None,
) -> Lemma2Record:
    """Build Q̂_Y and the test T̂ that strictly improve on ``q_y``.

    Raises:
        PreconditionFailed: Q_Y(y_bar) > 0, or fewer than two lists carry
            mass at y_bar (an outcome attributable to a single list).
    """
    _check_alphabet(P, q_y)
    PL = build_list_joint(P, L)
    if y_bar is None:
        y_bar = find_lemma2_outcome(P, L, q_y)
    elif not 0 <= y_bar < P.card_y:
        raise ValidationError(f"outcome {y_bar} outside [0, {P.card_y})")
    reason = _lemma2_conditions(PL, q_y, y_bar)
    if reason is not None:
        raise PreconditionFailed(reason)

    n_lists = PL.n_lists
    beta = list_prior(P.M, L).mass
    pq = list_mass_pair(P, L, q_y, PL)
    test = alpha_beta(pq, beta)
    lam = test.threshold

    # optimal test T on the full (list, outcome) grid; dropped atoms carry no mass
    decide0 = np.zeros((n_lists, PL.card_y))
    for (r, y), d in zip(pq.support, test.decide0):
        decide0[r, y] = d

    column = PL.p_list[:, y_bar]
    peak = float(column.max())
    mu = n_lists * peak + lam
    q_hat = np.where(np.arange(PL.card_y) == y_bar, n_lists * peak / mu, lam * q_y.q / mu)
    if abs(float(np.sum(q_hat)) - 1.0) > NORMALIZATION_TOL:
        raise DegenerateInstance(f"constructed Q_Y sums to {float(np.sum(q_hat))!r}")
    q_hat.setflags(write=False)
    q_hat_dist = OutputDistribution(q=q_hat)

    x_bar_rank = int(np.flatnonzero(column >= peak - IDENTITY_TOL * peak)[0])
    decide0_hat = decide0.copy()
    decide0_hat[:, y_bar] = 0.0
    decide0_hat[x_bar_rank, y_bar] = 1.0

    q_hat_grid = np.broadcast_to(q_hat * beta, decide0.shape)
    eps1_hat = float(np.sum(q_hat_grid * decide0_hat))
    eps0_before = float(np.sum(PL.p_list * (1.0 - decide0)))
    eps0_after = float(np.sum(PL.p_list * (1.0 - decide0_hat)))

    cases = _threshold_cases(PL.p_list, q_hat_grid, decide0_hat, mu, y_bar, x_bar_rank)
    alpha_after = alpha_beta(list_mass_pair(P, L, q_hat_dist, PL), beta).value

    record = Lemma2Record(
        y_bar=y_bar,
        x_bar=PL.lists[x_bar_rank],
        q_hat=q_hat_dist,
        mu=mu,
        lambda_star=lam,
        eps1_hat=eps1_hat,
        eps0_before=eps0_before,
        eps0_after=eps0_after,
        threshold_cases_ok=cases,
        alpha_before=test.value,
        alpha_after=alpha_after,
    )
    logger.debug(
        "lemma2 at y=%d: mu=%r, eps0 %r -> %r, cases=%s",
        y_bar,
        mu,
        eps0_before,
        eps0_after,
        cases,
    )
    return record


def _threshold_cases(
    p_grid: np.ndarray,
    q_grid: np.ndarray,
    decide0: np.ndarray,
    mu: float,
    y_bar: int,
    x_bar_rank: int,
) -> Tuple[bool, bool, bool]:
    """Check that ``decide0`` is a likelihood-ratio test at threshold mu.

    Returns one flag per case: outcomes other than y_bar; y_bar with lists
    other than x_bar (decided 1, ratio <= mu); y_bar with x_bar (ratio = mu).
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(q_grid > 0.0, p_grid / np.where(q_grid > 0.0, q_grid, 1.0), np.inf)
    upper = mu * (1.0 + THRESHOLD_CHECK_TOL)
    lower = mu * (1.0 - THRESHOLD_CHECK_TOL)
    live = (p_grid > 0.0) | (q_grid > 0.0)

    others = np.ones(p_grid.shape[1], dtype=bool)
    others[y_bar] = False
    r, d, m = ratio[:, others], decide0[:, others], live[:, others]
    above_ok = np.all(d[m & (r > upper)] == 1.0)
    below_ok = np.all(d[m & (r < lower)] == 0.0)
    split_ok = np.all((r[m & (d > 0.0) & (d < 1.0)] >= lower) & (r[m & (d > 0.0) & (d < 1.0)] <= upper))
    case_other = bool(above_ok and below_ok and split_ok)

    rest = np.ones(p_grid.shape[0], dtype=bool)
    rest[x_bar_rank] = False
    col_ratio = ratio[rest, y_bar]
    case_rest = bool(np.all(decide0[rest, y_bar] == 0.0) and np.all(col_ratio <= upper))

    xbar_ratio = ratio[x_bar_rank, y_bar]
    case_xbar = bool(decide0[x_bar_rank, y_bar] == 1.0 and lower <= xbar_ratio <= upper)
    return case_other, case_rest, case_xbar
