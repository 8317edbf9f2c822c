"""Cooperative step budget shared by the Groebner engines.

A :class:`StepBudget` is threaded through long-running completion loops; each
reduction step spends one unit.  Exhausting the budget raises
:class:`StepBudgetExceeded`, which callers treat as a resource error, never a
wrong answer.  The same object doubles as a cancellation token: a callback may
flip :attr:`cancelled` from another thread.
"""

from __future__ import annotations


class ResourceLimitError(RuntimeError):
    """Base class for controlled resource exhaustion."""


class StepBudgetExceeded(ResourceLimitError):
    pass


class CancelledError(ResourceLimitError):
    pass


class StepBudget:
    __slots__ = ("limit", "used", "cancelled")

    def __init__(self, limit: int | None = None):
        if limit is not None and limit <= 0:
            raise ValueError("step budget must be positive")
        self.limit = limit
        self.used = 0
        self.cancelled = False

    def spend(self, n: int = 1):
        self.used += n
        if self.cancelled:
            raise CancelledError("computation cancelled")
        if self.limit is not None and self.used > self.limit:
            raise StepBudgetExceeded(
                f"step budget of {self.limit} reduction steps exhausted"
            )

    def cancel(self):
        self.cancelled = True


def ensure_budget(budget: StepBudget | None) -> StepBudget:
    return budget if budget is not None else StepBudget(None)
