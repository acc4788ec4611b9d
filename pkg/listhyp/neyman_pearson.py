# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Discrete binary Neyman-Pearson machinery.

A binary test between P (hypothesis 0) and Q (hypothesis 1) over a finite set
of atoms is represented by ``decide0``: the per-atom probability of deciding
hypothesis 0. Type-0 error is P-mass decided 1, type-1 error is Q-mass
decided 0.

Optimal tests threshold the likelihood ratio p/q. Atoms are grouped into ratio
classes (ratios equal up to a relative 1e-12); the boundary class gets a
single shared randomization weight ``gamma``.
"""

import logging
import math
from dataclasses import dataclass
from typing import Hashable, List, Optional, Sequence, Tuple

import numpy as np

from listhyp.core.constants import CLAMP_TOL, NORMALIZATION_TOL, RATIO_REL_TOL
from listhyp.core.errors import BadAlpha, BadBeta, NegativeMass, NotNormalized, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MassPair:
    """Hypothesis-0 mass ``p`` and hypothesis-1 mass ``q`` on common atoms.

    Atoms where both masses vanish are dropped at construction.
    """

    support: Tuple[Hashable, ...]
    p: np.ndarray
    q: np.ndarray

    @property
    def size(self) -> int:
        return len(self.support)

    @property
    def ratio(self) -> np.ndarray:
        """Likelihood ratio p/q; +inf where q = 0."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.q > 0.0, self.p / np.where(self.q > 0.0, self.q, 1.0), np.inf)


@dataclass(frozen=True)
class NPResult:
    """Solution of a Neyman-Pearson tradeoff.

    ``gamma`` is the probability of deciding hypothesis 0 on the boundary
    ratio class; ``decide0`` is the full randomized test.
    """

    value: float
    threshold: float
    gamma: float
    achieved_constraint: float
    decide0: np.ndarray


@dataclass(frozen=True)
class RatioClass:
    """Atoms sharing one likelihood ratio value."""

    ratio: float
    indices: np.ndarray
    p_mass: float
    q_mass: float


def _check_unit(value: float, exc: type, name: str) -> None:
    if not (0.0 <= value <= 1.0):
        raise exc(f"{name}={value!r} must lie in [0, 1]")


def mass_pair(
    p: Sequence[float],
    q: Sequence[float],
    support: Optional[Sequence[Hashable]] = None,
) -> MassPair:
    """Validate two distributions on common atoms and drop the empty atoms."""
    p_arr = np.array(p, dtype=np.float64).ravel()
    q_arr = np.array(q, dtype=np.float64).ravel()
    if p_arr.shape != q_arr.shape:
        raise ValidationError(f"p and q sizes differ: {p_arr.size} vs {q_arr.size}")
    atoms = tuple(range(p_arr.size)) if support is None else tuple(support)
    if len(atoms) != p_arr.size:
        raise ValidationError(f"{len(atoms)} atoms for {p_arr.size} masses")

    for name, arr in (("p", p_arr), ("q", q_arr)):
        if not np.all(np.isfinite(arr)):
            raise ValidationError(f"{name} contains non-finite entries")
        if np.any(arr < -CLAMP_TOL):
            raise NegativeMass(f"{name} has negative mass {float(arr.min())!r}")
        total = float(np.sum(arr))
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise NotNormalized(f"{name} sums to {total!r}, expected 1")
    p_arr = np.clip(p_arr, 0.0, None)
    q_arr = np.clip(q_arr, 0.0, None)

    keep = (p_arr > 0.0) | (q_arr > 0.0)
    if not np.all(keep):
        logger.debug("Dropping %d atoms with zero mass under both hypotheses", int((~keep).sum()))
    p_arr = np.ascontiguousarray(p_arr[keep])
    q_arr = np.ascontiguousarray(q_arr[keep])
    p_arr.setflags(write=False)
    q_arr.setflags(write=False)
    kept = tuple(atom for atom, k in zip(atoms, keep) if k)
    return MassPair(support=kept, p=p_arr, q=q_arr)


def ratio_classes(pq: MassPair) -> List[RatioClass]:
    """Ratio classes in descending ratio order.

    Atoms are sorted by (ratio descending, index ascending); a new class starts
    whenever the ratio drops more than a relative 1e-12 below its predecessor.
    A class reports the largest ratio among its atoms.
    """
    ratio = pq.ratio
    if ratio.size == 0:
        return []
    order = np.lexsort((np.arange(ratio.size), -ratio))
    sorted_ratio = ratio[order]
    breaks = sorted_ratio[1:] < sorted_ratio[:-1] * (1.0 - RATIO_REL_TOL)
    starts = np.concatenate(([0], np.flatnonzero(breaks) + 1))
    ends = np.append(starts[1:], order.size)

    classes: List[RatioClass] = []
    for start, end in zip(starts, ends):
        idx = np.sort(order[start:end])
        classes.append(
            RatioClass(
                ratio=float(sorted_ratio[start]),
                indices=idx,
                p_mass=float(np.sum(pq.p[idx])),
                q_mass=float(np.sum(pq.q[idx])),
            )
        )
    return classes


def type0_error(pq: MassPair, decide0: np.ndarray) -> float:
    """P-mass decided 1."""
    return float(np.sum(pq.p * (1.0 - decide0)))


def type1_error(pq: MassPair, decide0: np.ndarray) -> float:
    """Q-mass decided 0."""
    return float(np.sum(pq.q * decide0))


def _result(value: float, threshold: float, gamma: float, achieved: float, decide0: np.ndarray) -> NPResult:
    decide0.setflags(write=False)
    return NPResult(
        value=min(max(value, 0.0), 1.0),
        threshold=threshold,
        gamma=gamma,
        achieved_constraint=min(max(achieved, 0.0), 1.0),
        decide0=decide0,
    )


def alpha_beta(pq: MassPair, beta: float) -> NPResult:
    """Minimum type-0 error over randomized tests with type-1 error <= beta.

    Greedy on descending ratio: infinite-ratio atoms are decided 0 for free,
    zero-ratio atoms are always decided 1, and the class that exhausts the
    budget is randomized.
    """
    _check_unit(beta, BadBeta, "beta")
    decide0 = np.zeros(pq.size)
    remaining = beta
    threshold = 0.0
    gamma = 0.0

    for cls in ratio_classes(pq):
        if cls.ratio == 0.0:
            break
        if math.isinf(cls.ratio):
            decide0[cls.indices] = 1.0
            continue
        if cls.q_mass <= remaining * (1.0 - RATIO_REL_TOL):
            decide0[cls.indices] = 1.0
            remaining -= cls.q_mass
            continue
        gamma = min(1.0, remaining / cls.q_mass)
        decide0[cls.indices] = gamma
        threshold = cls.ratio
        break

    result = _result(type0_error(pq, decide0), threshold, gamma, type1_error(pq, decide0), decide0)
    logger.debug(
        "alpha_beta(beta=%r) = %r (threshold=%r, gamma=%r)",
        beta,
        result.value,
        result.threshold,
        result.gamma,
    )
    return result


def beta_alpha(pq: MassPair, alpha: float) -> NPResult:
    """Minimum type-1 error over randomized tests with type-0 error <= alpha.

    Mirror of alpha_beta: decide 1 on ascending ratio until the P-budget alpha
    is spent. ``threshold`` is +inf when every finite-ratio atom is decided 1.
    """
    _check_unit(alpha, BadAlpha, "alpha")
    decide0 = np.ones(pq.size)
    remaining = alpha
    threshold = math.inf
    gamma = 1.0

    for cls in reversed(ratio_classes(pq)):
        if math.isinf(cls.ratio):
            break
        if cls.p_mass == 0.0:
            decide0[cls.indices] = 0.0
            continue
        if cls.p_mass <= remaining * (1.0 - RATIO_REL_TOL):
            decide0[cls.indices] = 0.0
            remaining -= cls.p_mass
            continue
        gamma = 1.0 - min(1.0, remaining / cls.p_mass)
        decide0[cls.indices] = gamma
        threshold = cls.ratio
        break

    return _result(type1_error(pq, decide0), threshold, gamma, type0_error(pq, decide0), decide0)


def alpha_beta_dual(pq: MassPair, beta: float) -> float:
    """sup over lambda >= 0 of P[r <= lambda] + lambda * Q[r > lambda] - beta * lambda.

    The objective is piecewise linear between realized ratios, so the sup is
    attained on {0} and the finite class ratios.
    """
    _check_unit(beta, BadBeta, "beta")
    best = 0.0  # lambda = 0 with no zero-ratio atoms
    p_above = 0.0
    q_above = 0.0
    p_total = float(np.sum(pq.p))
    for cls in ratio_classes(pq):
        if not math.isinf(cls.ratio):
            # classes before this one have ratio > cls.ratio
            candidate = (p_total - p_above) + cls.ratio * q_above - beta * cls.ratio
            best = max(best, candidate)
        p_above += cls.p_mass
        q_above += cls.q_mass
    return min(max(best, 0.0), 1.0)


def pareto_curve(pq: MassPair, grid: Sequence[float]) -> List[Tuple[float, float]]:
    """(beta, alpha_beta) for every grid point."""
    for beta in grid:
        _check_unit(beta, BadBeta, "beta")
    return [(float(beta), alpha_beta(pq, beta).value) for beta in grid]


def tradeoff_dual_curve(pq: MassPair, grid: Sequence[float]) -> List[Tuple[float, float]]:
    """(alpha, beta_alpha) for every grid point."""
    for alpha in grid:
        _check_unit(alpha, BadAlpha, "alpha")
    return [(float(alpha), beta_alpha(pq, alpha).value) for alpha in grid]
