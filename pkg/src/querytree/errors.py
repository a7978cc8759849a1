"""Exception types shared across the package."""

from __future__ import annotations


class QueryTreeError(Exception):
    """Base class for package-specific errors."""


class DomainError(QueryTreeError, ValueError):
    """An argument is outside the mathematical domain of an operation
    (invalid probability vector, alpha out of range, negative Zipf exponent)."""


class DegenerateSplitError(QueryTreeError):
    """A query sends every object at a node to the same child."""

    def __init__(self, query: int, objects: tuple[int, ...]):
        self.query = query
        self.objects = objects
        super().__init__(f"query {query} does not split object set {objects}")


class NotIdentifiableError(QueryTreeError):
    """A heterogeneous object set cannot be split by any available query."""

    def __init__(self, objects: tuple[int, ...], message: str | None = None):
        self.objects = objects
        super().__init__(message or f"no query splits heterogeneous object set {objects}")


class InconsistentAnswersError(QueryTreeError):
    """Recorded answers rule out every object."""


class UnsupportedRegimeError(QueryTreeError):
    """The operation is not defined for the requested lambda regime."""


class BudgetExceededError(QueryTreeError):
    """The oracle's memo table outgrew its subset budget."""

    def __init__(self, subsets_explored: int, budget: int):
        self.subsets_explored = subsets_explored
        self.budget = budget
        super().__init__(f"subset budget exceeded: {subsets_explored} >= {budget}")


class GenerationFailedError(QueryTreeError):
    """Random instance generation could not reach an identifiable matrix."""


class InvalidTreeError(QueryTreeError):
    """A decision tree violates its structural invariants for the instance."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


class FormatError(QueryTreeError, ValueError):
    """A serialized instance, tree, or config document is malformed."""
