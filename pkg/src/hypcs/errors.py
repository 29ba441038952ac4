"""Exceptions raised by the package."""


class DomainError(ValueError):
    """A point, matrix or frame lies outside the domain of an operation."""


class FocalRadiusError(DomainError):
    """A collar or propagation radius reaches a focal point of the leaf."""


class NonConvexError(DomainError):
    """A surface fails the convexity test."""


class NonConstantFrameError(ValueError):
    """A frame field is not constant along the normal flow."""


class ConfigError(ValueError):
    """A scenario configuration is invalid."""
