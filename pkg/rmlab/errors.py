"""
Exception types raised by the service layer.

All of them are ``ValueError`` subclasses so callers that only know about
``ValueError`` keep working; the command layer maps them onto exit codes.
"""


class RmlabError(ValueError):
    """Base class for rmlab errors."""


class FieldError(RmlabError):
    """Invalid field description: non-prime characteristic, bad modulus, bad sub-degree."""


class ParameterError(RmlabError):
    """A construction or operation was called outside its preconditions."""


class BudgetExceededError(RmlabError):
    """An exhaustive enumeration would exceed the configured budget."""

    def __init__(self, what: str, needed: int, budget: int):
        self.what = what
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what}: needs {needed} steps, budget is {budget}")
