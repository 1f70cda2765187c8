"""Exception hierarchy shared by all modules."""


class CatGiniError(Exception):
    """Base class for all package errors."""


class InvalidInputError(CatGiniError, ValueError):
    """Input data violates a documented precondition."""


class ClassSizeError(InvalidInputError):
    """A class has fewer observations than the operation needs.

    Attributes
    ----------
    label : object
        The offending class label.
    size : int
        Its observed size.
    minimum : int
        The required minimum (2 for point estimation, 3 for jackknife
        pseudo-values).
    """

    def __init__(self, label, size, minimum):
        self.label = label
        self.size = size
        self.minimum = minimum
        super().__init__(
            f"class {label!r} has {size} observation(s); at least {minimum} required"
        )


class DegenerateSampleError(CatGiniError, ArithmeticError):
    """The sample has zero Gini mean difference (all points identical)."""


class ConfigError(CatGiniError, ValueError):
    """Invalid scenario configuration, optionally carrying a source line."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
