"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """Arguments violate an operation's preconditions."""


class InternalError(RuntimeError):
    """An identity that must hold exactly failed; indicates a bug."""


class UnsupportedCase(NotImplementedError):
    """The requested (shape, r) lies outside the cases with known generators."""
