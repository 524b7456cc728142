class GroupConnError(Exception):
    """Base class for errors raised by this package."""


class BudgetExceeded(GroupConnError):
    """A dense search would need more memory than allowed."""

    def __init__(self, required_bytes: int, budget_bytes: int, what: str = "state set"):
        self.required_bytes = required_bytes
        self.budget_bytes = budget_bytes
        super().__init__(
            f"{what} needs {required_bytes} bytes, budget is {budget_bytes} bytes"
        )


class SearchTimeout(GroupConnError):
    """A cooperative deadline expired inside a search loop."""
