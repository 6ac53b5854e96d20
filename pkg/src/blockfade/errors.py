"""Exception types shared across the package."""


class BlockfadeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(BlockfadeError, ValueError):
    """A constructor or operation received parameters outside its contract."""


class DomainError(BlockfadeError, ValueError):
    """A mathematical function was evaluated outside its domain."""


class ConvergenceError(BlockfadeError, RuntimeError):
    """An iterative solver hit its iteration cap before reaching tolerance."""
