"""Error hierarchy shared by every service.

The command line maps each class to an exit code through ``exit_code``.
"""


class LatticeError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 2


class InputError(LatticeError, ValueError):
    """A precondition of an operation does not hold for the given input."""

    exit_code = 2


class BudgetExceededError(LatticeError):
    """An enumeration or search would exceed its configured budget."""

    exit_code = 3

    def __init__(self, budget: str, requested: int, limit: int):
        self.budget = budget
        self.requested = requested
        self.limit = limit
        super().__init__(f"Budget '{budget}' exceeded: requested {requested}, limit {limit}")


class TheoremViolation(LatticeError):
    """A statement that is proven to hold was observed to fail.

    This always indicates an implementation bug, never bad input.
    """

    exit_code = 1

    def __init__(self, statement_id: str, message: str, witness=None):
        self.statement_id = statement_id
        self.witness = witness
        super().__init__(f"{statement_id}: {message}")


EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
