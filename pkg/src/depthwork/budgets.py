"""Budget knobs shared by the enumeration and rewriting engines."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Budgets:
    """Resource caps; None for size_budget means 10x the target ideal size."""

    size_budget: int | None = None
    step_budget: int = 50_000_000
    kb_rule_budget: int = 1_000_000

    def size_for(self, target: int) -> int:
        return self.size_budget if self.size_budget is not None else 10 * target
