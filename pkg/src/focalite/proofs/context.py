from dataclasses import dataclass, replace

from focalite.logic.formulas import Const, Formula, Term
from focalite.logic.substitution import fresh_name
from focalite.syntax.ast import TypeExpr


@dataclass(frozen=True, slots=True)
class StepContext:
    """What a proof step sees.

    Its own assumptions and hypotheses, those of every ancestor, and the
    statements of earlier siblings at each ancestor level. Later entries
    shadow earlier ones with the same name.
    """

    consts: tuple[tuple[str, Const], ...] = ()
    hypotheses: tuple[tuple[str, Formula], ...] = ()
    steps: tuple[tuple[str, Formula], ...] = ()

    def scope(self) -> dict[str, Term]:
        return dict(self.consts)

    def assume(
        self,
        names: tuple[tuple[str, TypeExpr], ...],
    ) -> tuple["StepContext", tuple[Const, ...]]:
        """Introduce rigid names; a name already in scope gets a fresh kernel name."""
        used = {const.name for _, const in self.consts}
        introduced: list[Const] = []
        for name, sort in names:
            const = Const(fresh_name(name, used), sort)
            used.add(const.name)
            introduced.append(const)
        bound = tuple((name, const) for (name, _), const in zip(names, introduced, strict=True))
        return replace(self, consts=self.consts + bound), tuple(introduced)

    def suppose(self, hypotheses: tuple[tuple[str, Formula], ...]) -> "StepContext":
        return replace(self, hypotheses=self.hypotheses + hypotheses)

    def with_steps(self, steps: tuple[tuple[str, Formula], ...]) -> "StepContext":
        return replace(self, steps=self.steps + steps)

    def hypothesis(self, name: str) -> Formula | None:
        return next((f for n, f in reversed(self.hypotheses) if n == name), None)

    def step(self, label: str) -> Formula | None:
        return next((f for n, f in reversed(self.steps) if n == label), None)

    def facts(self) -> tuple[tuple[str, Formula], ...]:
        """Everything ``conclude`` may use."""
        return self.hypotheses + self.steps
