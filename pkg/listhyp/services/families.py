# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Auxiliary Q_Y families.

A family spec is one of ``uniform``, ``marginal``, ``qstar`` or
``dirichlet:SEED:COUNT``. Dirichlet members are drawn with concentration 1,
member i from the sub-seed ``derive_seed(SEED, i)``.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from listhyp.bounds import qstar
from listhyp.core.constants import (
    FAMILY_DIRICHLET,
    FAMILY_MARGINAL,
    FAMILY_QSTAR,
    FAMILY_UNIFORM,
    SUPPORTED_FAMILIES,
)
from listhyp.core.errors import SchemaError
from listhyp.distributions import (
    JointDistribution,
    ListJointDistribution,
    OutputDistribution,
    build_list_joint,
    output_marginal,
    uniform_output,
    validate_output,
)
from listhyp.seeding import derive_seed, make_generator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FamilySpec:
    name: str
    seed: int = 0
    count: int = 1

    def __str__(self) -> str:
        if self.name == FAMILY_DIRICHLET:
            return f"{self.name}:{self.seed}:{self.count}"
        return self.name


@dataclass(frozen=True)
class FamilyMember:
    """One Q_Y of a family, tagged for reporting."""

    family: str
    index: int
    q_y: OutputDistribution


def parse_family(spec: str) -> FamilySpec:
    """Parse a family spec string.

    Raises:
        SchemaError: unknown family name or malformed dirichlet parameters
    """
    parts = spec.strip().split(":")
    name = parts[0].lower()
    if name not in SUPPORTED_FAMILIES:
        raise SchemaError(f"unknown Q_Y family {spec!r}; expected one of {SUPPORTED_FAMILIES}")
    if name != FAMILY_DIRICHLET:
        if len(parts) != 1:
            raise SchemaError(f"family {name!r} takes no parameters: {spec!r}")
        return FamilySpec(name=name)

    if len(parts) != 3:
        raise SchemaError(f"expected dirichlet:SEED:COUNT, got {spec!r}")
    try:
        seed, count = int(parts[1]), int(parts[2])
    except ValueError as e:
        raise SchemaError(f"dirichlet seed and count must be integers: {spec!r}") from e
    if count < 1:
        raise SchemaError(f"dirichlet count must be positive: {spec!r}")
    return FamilySpec(name=name, seed=seed, count=count)


def dirichlet_output(card_y: int, seed: int) -> OutputDistribution:
    """Q_Y drawn from the flat Dirichlet distribution."""
    draws = make_generator(seed).gamma(1.0, size=card_y)
    total = float(np.sum(draws))
    if total <= 0.0:
        return uniform_output(card_y)
    return validate_output(draws / total)


def expand_family(
    spec: FamilySpec,
    P: JointDistribution,
    L: int,
    PL: Optional[ListJointDistribution] = None,
) -> List[FamilyMember]:
    """All members of a family for the given instance, in index order."""
    label = str(spec)
    if spec.name == FAMILY_UNIFORM:
        return [FamilyMember(label, 0, uniform_output(P.card_y))]
    if spec.name == FAMILY_MARGINAL:
        return [FamilyMember(label, 0, output_marginal(P))]
    if spec.name == FAMILY_QSTAR:
        q_star, _ = qstar(PL if PL is not None else build_list_joint(P, L))
        return [FamilyMember(label, 0, q_star)]

    logger.debug("Drawing %d Dirichlet Q_Y with seed %d", spec.count, spec.seed)
    return [
        FamilyMember(label, i, dirichlet_output(P.card_y, derive_seed(spec.seed, i)))
        for i in range(spec.count)
    ]
