"""Semantic exception hierarchy for corruptmatch."""


class CorruptMatchError(Exception):
    """Base class for all library errors."""


class ParameterError(CorruptMatchError, ValueError):
    """A parameter is outside its valid range (probabilities, budgets, ...)."""


class SizeLimitError(CorruptMatchError):
    """An exact solver was asked to run above its instance-size cap."""


class EmptyDomainError(CorruptMatchError):
    """A quantity (e.g. precision) is undefined on an empty matching domain."""


class ComputationError(CorruptMatchError):
    """A numerical routine failed on a degenerate input (e.g. eigendecomposition)."""


class SchemaError(CorruptMatchError):
    """Serialized data does not match the expected file schema."""
