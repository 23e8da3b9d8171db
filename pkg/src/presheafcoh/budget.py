"""Size limit for dense matrices, overridable with PRESHEAFCOH_BUDGET."""
from __future__ import annotations

import os

DEFAULT_BUDGET = 40_000_000  # entries of the largest dense matrix built


class BudgetExceeded(RuntimeError):
    def __init__(self, what: str, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(f"{what} needs a {required}-entry matrix, budget is {budget}")


def budget_limit(budget: int | None = None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get("PRESHEAFCOH_BUDGET")
    return int(env) if env else DEFAULT_BUDGET
