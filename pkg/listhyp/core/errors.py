# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Exception hierarchy.

Every error carries the CLI exit code it maps to, so the command layer can
translate failures without inspecting messages.
"""

from listhyp.core.constants import EXIT_NUMERIC, EXIT_SCHEMA


class ListHypError(ValueError):
    """Base class for all listhyp errors."""

    exit_code: int = EXIT_NUMERIC


class ValidationError(ListHypError):
    """Numeric validation of an input failed."""


class NegativeMass(ValidationError):
    """A probability entry is negative beyond the clamp tolerance."""


class NotNormalized(ValidationError):
    """Probabilities do not sum to one within the renormalization slack."""


class EmptyAlphabet(ValidationError):
    """No hypotheses or no outcomes."""


class BadListSize(ValidationError):
    """List size L outside [1, M]."""


class BadBeta(ValidationError):
    """Type-1 constraint outside [0, 1]."""


class BadAlpha(ValidationError):
    """Type-0 constraint outside [0, 1]."""


class BadLambda(ValidationError):
    """Negative information-spectrum threshold."""


class TooLarge(ValidationError):
    """Input exceeds a size cap."""


class DegenerateInstance(ListHypError):
    """Instance has no usable probability mass."""


class PreconditionFailed(ListHypError):
    """The strict-improvement construction does not apply."""


class SchemaError(ListHypError):
    """Instance file or command argument does not match its schema."""

    exit_code = EXIT_SCHEMA
