# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Probability data model.

Validated joint distributions P_XY, canonical hypothesis lists, the induced
list-level joint distribution P_X̲Y, the uniform list prior Q_X̲, auxiliary
output distributions Q_Y and the instance generators.

All types are immutable: their numpy arrays are marked read-only on
construction.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from listhyp.core.constants import (
    CLAMP_TOL,
    EXACT_SUM_TOL,
    MAX_OUTCOMES,
    PRODUCT_LABEL_SEPARATOR,
    RENORMALIZE_SLACK,
)
from listhyp.core.errors import (
    BadListSize,
    DegenerateInstance,
    EmptyAlphabet,
    NegativeMass,
    NotNormalized,
    SchemaError,
    TooLarge,
    ValidationError,
)
from listhyp.seeding import make_generator

logger = logging.getLogger(__name__)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array, dtype=np.float64)
    array.setflags(write=False)
    return array


def _clean_mass(values: np.ndarray, what: str) -> np.ndarray:
    """Clamp tiny negatives, check the total and renormalize within slack."""
    if not np.all(np.isfinite(values)):
        raise ValidationError(f"{what} contains non-finite entries")
    if np.any(values < -CLAMP_TOL):
        worst = float(values.min())
        raise NegativeMass(f"{what} has negative mass {worst!r}")
    if np.any(values < 0.0):
        logger.debug("Clamping %d tiny negative entries of %s", int((values < 0).sum()), what)
        values = np.where(values < 0.0, 0.0, values)

    total = float(np.sum(values))
    if abs(total - 1.0) > RENORMALIZE_SLACK:
        raise NotNormalized(f"{what} sums to {total!r}, expected 1")
    if abs(total - 1.0) > EXACT_SUM_TOL:
        logger.debug("Renormalizing %s (sum %r)", what, total)
        values = values / total
    return values


def check_list_size(M: int, L: int) -> None:
    """Raise BadListSize unless 1 <= L <= M."""
    if L < 1 or L > M:
        raise BadListSize(f"list size L={L} must satisfy 1 <= L <= M={M}")


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JointDistribution:
    """Prior-and-likelihood matrix P_XY, rows are hypotheses, columns outcomes."""

    M: int
    outcome_labels: Tuple[str, ...]
    p: np.ndarray

    @property
    def card_y(self) -> int:
        return len(self.outcome_labels)

    @property
    def prior(self) -> np.ndarray:
        """Hypothesis marginal P_X."""
        return self.p.sum(axis=1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JointDistribution):
            return NotImplemented
        return (
            self.M == other.M
            and self.outcome_labels == other.outcome_labels
            and np.array_equal(self.p, other.p)
        )


@dataclass(frozen=True, order=True)
class HypothesisList:
    """Unordered list of L distinct hypotheses, stored strictly increasing."""

    entries: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) == 0:
            raise BadListSize("a hypothesis list needs at least one entry")
        if any(b <= a for a, b in zip(self.entries, self.entries[1:])):
            raise ValidationError(f"list entries must be strictly increasing: {self.entries}")
        if self.entries[0] < 0:
            raise ValidationError(f"negative hypothesis index in {self.entries}")

    @classmethod
    def of(cls, hypotheses: Sequence[int]) -> "HypothesisList":
        """Canonicalize any collection of distinct hypotheses."""
        entries = tuple(sorted(int(x) for x in hypotheses))
        if len(set(entries)) != len(entries):
            raise ValidationError(f"list entries must be distinct: {tuple(hypotheses)}")
        return cls(entries)

    @property
    def L(self) -> int:
        return len(self.entries)

    def contains(self, x: int) -> bool:
        return x in self.entries

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return "{" + ",".join(str(x) for x in self.entries) + "}"


@dataclass(frozen=True)
class ListJointDistribution:
    """Induced distribution P_X̲Y over (canonical list, outcome) pairs.

    Row r of ``p_list`` is the list of lexicographic rank r.
    """

    M: int
    L: int
    lists: Tuple[HypothesisList, ...]
    p_list: np.ndarray

    @property
    def n_lists(self) -> int:
        return len(self.lists)

    @property
    def card_y(self) -> int:
        return self.p_list.shape[1]

    def mass(self, hypotheses: HypothesisList, y: int) -> float:
        return float(self.p_list[rank_list(hypotheses, self.M), y])

    def column_max(self) -> np.ndarray:
        """max_S P_X̲Y(S, y) for every outcome y."""
        return self.p_list.max(axis=0)


@dataclass(frozen=True)
class ListPrior:
    """Uniform auxiliary prior Q_X̲ over the C(M, L) lists."""

    M: int
    L: int
    mass: float

    @property
    def n_lists(self) -> int:
        return math.comb(self.M, self.L)


@dataclass(frozen=True)
class OutputDistribution:
    """Auxiliary distribution Q_Y over the outcomes. Zero entries are allowed."""

    q: np.ndarray

    @property
    def card_y(self) -> int:
        return self.q.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OutputDistribution):
            return NotImplemented
        return np.array_equal(self.q, other.q)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_joint(
    raw_matrix: Sequence[Sequence[float]],
    outcome_labels: Optional[Sequence[str]] = None,
) -> JointDistribution:
    """Validate a raw P_XY matrix.

    Entries in (-1e-12, 0) are clamped to zero; a total within 1e-6 of one is
    renormalized to one.

    Raises:
        EmptyAlphabet: no rows or no columns
        NegativeMass: an entry below -1e-12
        NotNormalized: total further than 1e-6 from one
    """
    try:
        matrix = np.array(raw_matrix, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise SchemaError(f"P_XY must be a rectangular matrix of reals: {e}") from e

    if matrix.ndim != 2:
        if matrix.size == 0:
            raise EmptyAlphabet("P_XY is empty")
        raise SchemaError(f"P_XY must be two-dimensional, got shape {matrix.shape}")
    M, card_y = matrix.shape
    if M == 0 or card_y == 0:
        raise EmptyAlphabet(f"P_XY has shape {matrix.shape}; need M >= 1 and |Y| >= 1")

    matrix = _clean_mass(matrix, "P_XY")

    if outcome_labels is None:
        labels = tuple(f"y{j}" for j in range(card_y))
    else:
        labels = tuple(str(label) for label in outcome_labels)
        if len(labels) != card_y:
            raise SchemaError(f"{len(labels)} outcome labels for {card_y} columns")

    return JointDistribution(M=M, outcome_labels=labels, p=_frozen(matrix))


def validate_output(raw: Sequence[float]) -> OutputDistribution:
    """Validate an auxiliary output distribution with the P_XY clamp/renormalize rules."""
    try:
        q = np.array(raw, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise SchemaError(f"Q_Y must be a sequence of reals: {e}") from e
    if q.ndim != 1:
        raise SchemaError(f"Q_Y must be one-dimensional, got shape {q.shape}")
    if q.size == 0:
        raise EmptyAlphabet("Q_Y is empty")
    return OutputDistribution(q=_frozen(_clean_mass(q, "Q_Y")))


# ---------------------------------------------------------------------------
# Lists
# ---------------------------------------------------------------------------


def enumerate_lists(M: int, L: int) -> List[HypothesisList]:
    """All C(M, L) canonical lists in lexicographic order."""
    check_list_size(M, L)
    return [HypothesisList(combo) for combo in itertools.combinations(range(M), L)]


def rank_list(hypotheses: HypothesisList, M: int) -> int:
    """Lexicographic rank of a canonical list among all lists of its size."""
    L = hypotheses.L
    check_list_size(M, L)
    if hypotheses.entries[-1] >= M:
        raise ValidationError(f"list {hypotheses} has an index outside [0, {M})")
    rank = 0
    prev = -1
    for i, x in enumerate(hypotheses.entries):
        for v in range(prev + 1, x):
            rank += math.comb(M - 1 - v, L - 1 - i)
        prev = x
    return rank


def unrank_list(rank: int, M: int, L: int) -> HypothesisList:
    """Inverse of rank_list."""
    check_list_size(M, L)
    if rank < 0 or rank >= math.comb(M, L):
        raise ValidationError(f"rank {rank} outside [0, C({M},{L}))")
    entries = []
    x = 0
    for i in range(L):
        while True:
            block = math.comb(M - 1 - x, L - 1 - i)
            if rank < block:
                entries.append(x)
                x += 1
                break
            rank -= block
            x += 1
    return HypothesisList(tuple(entries))


def list_prior(M: int, L: int) -> ListPrior:
    check_list_size(M, L)
    return ListPrior(M=M, L=L, mass=1.0 / math.comb(M, L))


def build_list_joint(P: JointDistribution, L: int) -> ListJointDistribution:
    """Induced list distribution: member masses summed, divided by C(M-1, L-1)."""
    check_list_size(P.M, L)
    lists = tuple(enumerate_lists(P.M, L))
    members = np.array([hl.entries for hl in lists], dtype=np.intp)
    p_list = P.p[members].sum(axis=1) / math.comb(P.M - 1, L - 1)
    return ListJointDistribution(M=P.M, L=L, lists=lists, p_list=_frozen(p_list))


# ---------------------------------------------------------------------------
# Output distributions
# ---------------------------------------------------------------------------


def output_marginal(P: JointDistribution) -> OutputDistribution:
    """P_Y(y) = sum_x P_XY(x, y)."""
    return OutputDistribution(q=_frozen(P.p.sum(axis=0)))


def uniform_output(card_y: int) -> OutputDistribution:
    if card_y < 1:
        raise EmptyAlphabet("uniform Q_Y needs at least one outcome")
    return OutputDistribution(q=_frozen(np.full(card_y, 1.0 / card_y)))


def total_variation(q1: OutputDistribution, q2: OutputDistribution) -> float:
    if q1.card_y != q2.card_y:
        raise ValidationError(f"alphabet sizes differ: {q1.card_y} vs {q2.card_y}")
    return 0.5 * float(np.sum(np.abs(q1.q - q2.q)))


# ---------------------------------------------------------------------------
# Instance generators
# ---------------------------------------------------------------------------


def product_channel(
    prior: Sequence[float],
    channel: Sequence[Sequence[float]],
    n: int,
    symbol_labels: Optional[Sequence[str]] = None,
) -> JointDistribution:
    """Joint distribution of X and n i.i.d. channel uses.

    P_XY(x, z_1..z_n) = prior[x] * prod_i W[x][z_i]; outcomes are the n-tuples
    in lexicographic order, labelled "z1,z2,...".
    """
    if n < 1:
        raise ValidationError(f"block length n={n} must be positive")
    prior_arr = _clean_mass(np.array(prior, dtype=np.float64), "prior")
    W = np.array(channel, dtype=np.float64)
    if W.ndim != 2 or W.shape[0] != prior_arr.shape[0]:
        raise SchemaError(
            f"channel must be an M x |Z| matrix with M={prior_arr.shape[0]}, got shape {W.shape}"
        )
    n_symbols = W.shape[1]
    if n_symbols == 0:
        raise EmptyAlphabet("channel output alphabet is empty")
    W = np.vstack([_clean_mass(row, f"channel row {x}") for x, row in enumerate(W)])

    if n_symbols**n > MAX_OUTCOMES:
        raise TooLarge(f"|Z|^n = {n_symbols}^{n} exceeds {MAX_OUTCOMES} outcomes")

    if symbol_labels is None:
        symbol_labels = [str(z) for z in range(n_symbols)]
    elif len(symbol_labels) != n_symbols:
        raise SchemaError(f"{len(symbol_labels)} symbol labels for {n_symbols} symbols")

    tuples = np.array(list(itertools.product(range(n_symbols), repeat=n)), dtype=np.intp)
    p = prior_arr[:, None] * np.prod(W[:, tuples], axis=2)
    labels = [
        PRODUCT_LABEL_SEPARATOR.join(symbol_labels[z] for z in row) for row in tuples
    ]
    logger.debug("Built product-channel instance: M=%d, |Y|=%d", p.shape[0], p.shape[1])
    return validate_joint(p, labels)


def random_instance(
    M: int,
    card_y: int,
    L: int,
    seed: int,
    concentration: float = 1.0,
) -> JointDistribution:
    """Random P_XY from independent Gamma(concentration) cells, normalized.

    Deterministic for a fixed seed. ``L`` is only validated so the instance is
    usable with that list size.
    """
    if M < 1 or card_y < 1:
        raise EmptyAlphabet(f"need M >= 1 and |Y| >= 1, got M={M}, |Y|={card_y}")
    check_list_size(M, L)
    if not concentration > 0.0:
        raise ValidationError(f"concentration must be positive, got {concentration!r}")

    rng = make_generator(seed)
    cells = rng.gamma(concentration, size=(M, card_y))
    total = float(np.sum(cells))
    if total <= 0.0:
        raise DegenerateInstance(f"all Gamma draws underflowed (concentration={concentration!r})")
    return validate_joint(cells / total)
