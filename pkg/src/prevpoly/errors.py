"""Exception types shared across the package."""

from __future__ import annotations


class PrevpolyError(Exception):
    """Base class for all domain errors raised by this package."""


class DimensionMismatch(PrevpolyError):
    """Vector or constraint dimensions do not agree."""


class DependentColumns(PrevpolyError):
    """A caller passed linearly dependent columns where independence is required."""


class NotNormalized(PrevpolyError):
    """A gamble set operation requires payoffs with minimum 0 and maximum 1."""


class MissingIndicators(PrevpolyError):
    """The gamble set must contain every singleton indicator."""


class IndexMismatch(PrevpolyError):
    """A prevision is not indexed by the expected gamble set."""


class EmptyPolytope(PrevpolyError):
    """The constraint system has no feasible point."""


class UnboundedPolytope(PrevpolyError):
    """The feasible set has a recession direction; vertices alone cannot describe it."""


class SureLoss(PrevpolyError):
    """No probability mass function dominates the given lower prevision."""


class BudgetExceeded(PrevpolyError):
    """A configured resource budget (vertices, rays, or time) was exhausted."""


class FamilyParameterError(PrevpolyError):
    """Invalid parameters for a gamble-set family."""
