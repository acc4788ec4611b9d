# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Cross-check of the closed forms against the oracles on seeded instances.

Instance i of a run draws M, L and |Y| and its matrix from the sub-seed
``derive_seed(seed, i)``, so any failing instance can be regenerated alone.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from listhyp.bounds import info_spectrum_sup, list_mass_pair, meta_converse_bound, qstar
from listhyp.core.constants import (
    BOUND_TOL,
    BRUTE_NP_MAX_SUPPORT,
    DUAL_TOL,
    IDENTITY_TOL,
    ORACLE_CHECK_MAX_L,
    ORACLE_CHECK_MAX_M,
    ORACLE_CHECK_MAX_OUTCOMES,
    ORACLE_CHECK_RANDOM_QY,
)
from listhyp.core.errors import TooLarge, ValidationError
from listhyp.distributions import JointDistribution, build_list_joint, random_instance
from listhyp.list_test import min_error
from listhyp.models.report import OracleCheckSummary, OracleFailure
from listhyp.neyman_pearson import MassPair, alpha_beta, alpha_beta_dual
from listhyp.oracle import brute_alpha_beta, brute_min_error
from listhyp.seeding import derive_seed, make_generator
from listhyp.services.families import dirichlet_output
from listhyp.services.pool import parallel_map

logger = logging.getLogger(__name__)


def oracle_instance(seed: int, index: int) -> Tuple[JointDistribution, int]:
    """Random instance number ``index`` of a run seeded with ``seed``."""
    stream = derive_seed(seed, index)
    rng = make_generator(stream)
    M = int(rng.integers(2, ORACLE_CHECK_MAX_M + 1))
    L = int(rng.integers(1, min(ORACLE_CHECK_MAX_L, M) + 1))
    card_y = int(rng.integers(2, ORACLE_CHECK_MAX_OUTCOMES + 1))
    return random_instance(M, card_y, L, seed=derive_seed(stream, 0)), L


@dataclass
class _Checker:
    index: int
    P: JointDistribution
    L: int
    checks: int = 0
    failures: List[OracleFailure] = field(default_factory=list)

    def close(self, check: str, expected: float, actual: float, tol: float) -> None:
        self.checks += 1
        if not abs(expected - actual) <= tol:
            self._fail(check, expected, actual)

    def at_most(self, check: str, limit: float, actual: float, tol: float) -> None:
        self.checks += 1
        if not actual <= limit + tol:
            self._fail(check, limit, actual)

    def _fail(self, check: str, expected: float, actual: float) -> None:
        logger.warning("Instance %d failed %s: expected %r, got %r", self.index, check, expected, actual)
        self.failures.append(
            OracleFailure(
                instance_index=self.index,
                M=self.P.M,
                L=self.L,
                cardY=self.P.card_y,
                check=check,
                expected=expected,
                actual=actual,
            )
        )

    def neyman_pearson(self, label: str, pq: MassPair, beta: float) -> None:
        primal = alpha_beta(pq, beta).value
        self.close(f"{label}_primal_dual", primal, alpha_beta_dual(pq, beta), DUAL_TOL)
        if pq.size <= BRUTE_NP_MAX_SUPPORT:
            self.close(f"{label}_brute_np", brute_alpha_beta(pq, beta), primal, DUAL_TOL)


def check_instance(index: int, P: JointDistribution, L: int, seed: int) -> Tuple[int, List[OracleFailure]]:
    """Run every check on one instance; returns (checks run, failures)."""
    checker = _Checker(index=index, P=P, L=L)
    eps = min_error(P, L).eps_min
    beta = 1.0 / math.comb(P.M, L)

    try:
        checker.close("brute_min_error", brute_min_error(P, L), eps, IDENTITY_TOL)
    except TooLarge as e:
        logger.warning("Instance %d: skipping brute-force list error (%s)", index, e)

    previous = 1.0
    for size in range(1, P.M + 1):
        current = min_error(P, size).eps_min
        checker.at_most(f"monotone_in_L_{size}", previous, current, IDENTITY_TOL)
        previous = current

    PL = build_list_joint(P, L)
    q_star, mu = qstar(PL)
    mc = meta_converse_bound(P, L, q_star)
    checker.close("meta_converse_at_qstar", eps, mc.lower_bound_eps, BOUND_TOL)
    spectrum = info_spectrum_sup(P, L, q_star)
    checker.close("info_spectrum_at_qstar", eps, spectrum.lower_bound_eps, BOUND_TOL)
    checker.close("lambda_star", math.comb(P.M, L) * mu, spectrum.lambda_opt, DUAL_TOL)
    checker.neyman_pearson("qstar", list_mass_pair(P, L, q_star, PL), beta)

    stream = derive_seed(seed, index)
    for k in range(ORACLE_CHECK_RANDOM_QY):
        q_y = dirichlet_output(P.card_y, derive_seed(stream, k + 1))
        mc_bound = meta_converse_bound(P, L, q_y).lower_bound_eps
        checker.at_most(f"meta_converse_direction_{k}", eps, mc_bound, BOUND_TOL)
        is_bound = info_spectrum_sup(P, L, q_y).lower_bound_eps
        checker.at_most(f"info_spectrum_direction_{k}", eps, is_bound, BOUND_TOL)
        checker.neyman_pearson(f"random_qy_{k}", list_mass_pair(P, L, q_y, PL), beta)

    return checker.checks, checker.failures


def run_oracle_check(
    count: int,
    seed: int,
    instance: Optional[Tuple[JointDistribution, int]] = None,
) -> OracleCheckSummary:
    """Check ``count`` generated instances, or the single given (P, L)."""
    if instance is not None:
        jobs = [(0, instance[0], instance[1])]
    else:
        if count < 1:
            raise ValidationError(f"instance count must be positive, got {count}")
        jobs = [(i, *oracle_instance(seed, i)) for i in range(count)]

    logger.info("Oracle check over %d instance(s), seed %d", len(jobs), seed)
    results = parallel_map(lambda job: check_instance(job[0], job[1], job[2], seed), jobs)
    checks = sum(n for n, _ in results)
    failures = sorted(
        (f for _, fs in results for f in fs),
        key=lambda f: (f.instance_index, f.check),
    )
    if failures:
        logger.warning("%d of %d oracle checks failed", len(failures), checks)
    return OracleCheckSummary(
        count=len(jobs),
        seed=seed,
        checks_run=checks,
        passed=not failures,
        failures=failures,
    )
