from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import BudgetExceeded

DEFAULT_BUDGET = 10**6


def default_budget() -> int:
    env = os.environ.get("SPANFORGE_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class Budget:
    """Counts candidate spans/cospans examined by one query."""

    def __init__(self, cap: int | None = None):
        self.cap = default_budget() if cap is None else int(cap)
        self.used = 0

    def spend(self, n: int, what: str = "candidates") -> None:
        self.used += int(n)
        if self.used > self.cap:
            raise BudgetExceeded(f"{what}: examined {self.used} > budget {self.cap}")


def as_budget(budget) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(budget)


@dataclass
class CheckReport:
    verdict: bool
    witnesses: list = field(default_factory=list)
    counterexample: dict | None = None
    stats: dict = field(default_factory=dict)
    budget_hit: bool = False
    check: str = ""

    def __post_init__(self):
        if self.verdict and self.counterexample is not None:
            raise ValueError("a passing report cannot carry a counterexample")
        if not self.verdict and self.counterexample is None and not self.budget_hit:
            raise ValueError("a failing report needs a counterexample")

    def __bool__(self):
        return self.verdict

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "verdict": self.verdict,
            "counterexample": self.counterexample,
            "witnesses": self.witnesses,
            "stats": self.stats,
            "budget_hit": self.budget_hit,
        }


def fresh(budget) -> Budget:
    """A new counter with the same cap, for one per-cospan search."""
    cap = budget.cap if isinstance(budget, Budget) else budget
    return Budget(cap)
