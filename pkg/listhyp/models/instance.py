# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Pydantic models for the JSON instance schema and generator specs.

Shape errors are schema errors (exit code 2); numeric problems such as
negative or unnormalized mass surface later from validate_joint as
validation errors (exit code 3).
"""

import hashlib
import json
from typing import List, Optional

import pydantic
from pydantic import BaseModel, ConfigDict, Field, model_validator

from listhyp.core.errors import SchemaError
from listhyp.distributions import JointDistribution, check_list_size, validate_joint


class Instance(BaseModel):
    """A joint distribution P_XY with the list size it is analyzed at."""

    model_config = ConfigDict(extra="forbid")

    M: int = Field(ge=1)
    L: int = Field(ge=1)
    outcome_labels: List[str]
    P_XY: List[List[float]]

    @model_validator(mode="after")
    def _check_shape(self) -> "Instance":
        if len(self.P_XY) != self.M:
            raise ValueError(f"P_XY has {len(self.P_XY)} rows, expected M={self.M}")
        card_y = len(self.outcome_labels)
        for x, row in enumerate(self.P_XY):
            if len(row) != card_y:
                raise ValueError(f"row {x} of P_XY has {len(row)} entries, expected {card_y}")
        return self

    def to_joint(self) -> JointDistribution:
        """Validated JointDistribution; also checks 1 <= L <= M."""
        P = validate_joint(self.P_XY, self.outcome_labels)
        check_list_size(P.M, self.L)
        return P

    @classmethod
    def from_joint(cls, P: JointDistribution, L: int) -> "Instance":
        return cls(M=P.M, L=L, outcome_labels=list(P.outcome_labels), P_XY=P.p.tolist())

    def content_hash(self) -> str:
        """sha256 over the canonical JSON encoding of the instance."""
        canonical = json.dumps(self.model_dump(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def to_json(self) -> str:
        return json.dumps(self.model_dump(), indent=2) + "\n"


class ProductChannelSpec(BaseModel):
    """Prior, per-hypothesis channel rows and block length for `gen`."""

    model_config = ConfigDict(extra="forbid")

    prior: List[float]
    channel: List[List[float]]
    n: int = Field(ge=1)
    symbol_labels: Optional[List[str]] = None


def parse_instance(text: str) -> Instance:
    """Parse instance JSON, mapping any decode or shape problem to SchemaError."""
    try:
        return Instance.model_validate_json(text)
    except pydantic.ValidationError as e:
        raise SchemaError(f"instance does not match the schema: {e}") from e


def parse_product_channel(text: str) -> ProductChannelSpec:
    try:
        return ProductChannelSpec.model_validate_json(text)
    except pydantic.ValidationError as e:
        raise SchemaError(f"product-channel spec does not match the schema: {e}") from e
