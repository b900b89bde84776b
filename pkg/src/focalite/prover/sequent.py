from dataclasses import dataclass
from typing import Literal

from focalite.logic.formulas import Formula, format_kernel

type BudgetLimit = Literal["nodes", "timeout"]


@dataclass(frozen=True, slots=True)
class Sequent:
    """Named facts and the goal they should entail. All formulas are closed."""

    facts: tuple[tuple[str, Formula], ...]
    goal: Formula

    def render(self) -> str:
        lines = [f"{name}: {format_kernel(fact)}" for name, fact in self.facts]
        lines.append(f"|- {format_kernel(self.goal)}")
        return "\n".join(lines)


@dataclass(frozen=True, slots=True)
class Proved:
    closed_branches: int
    gamma_rounds: int
    splits: int


@dataclass(frozen=True, slots=True)
class NotProved:
    open_branch: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class BudgetExceeded:
    limit: BudgetLimit


type ProverOutcome = Proved | NotProved | BudgetExceeded
