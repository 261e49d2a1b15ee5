"""Exception types shared across the package."""


class HypercommError(Exception):
    """Base class for package errors."""


class ParseError(HypercommError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyNetworkError(HypercommError, ValueError):
    """No hyperedge survived ingestion."""


class NumericalFailure(HypercommError, ArithmeticError):
    """A non-finite objective or gradient was produced during fitting."""

    def __init__(self, message, iteration=None):
        self.iteration = iteration
        if iteration is not None:
            message = f"iteration {iteration}: {message}"
        super().__init__(message)
