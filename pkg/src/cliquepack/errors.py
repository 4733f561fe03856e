class ParameterError(ValueError):
    """An argument violates an operation's precondition."""


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetExceeded(RuntimeError):
    """A search ran out of nodes before it could prove its answer.

    ``best`` carries whatever partial result the search had reached.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class SolverError(RuntimeError):
    pass
