"""Structural induction over lists."""

from dataclasses import dataclass

from focalite.exceptions import NotInductiveError
from focalite.logic.formulas import (
    CONS_SYMBOL,
    NIL_SYMBOL,
    Const,
    Fn,
    Forall,
    Formula,
    Term,
    Var,
    constants,
    format_kernel,
    forall,
    formula_terms,
)
from focalite.logic.substitution import fresh_name, substitute
from focalite.syntax import ast

HYPOTHESIS_NAME = "HI"


@dataclass(frozen=True, slots=True)
class InductionScheme:
    """``all l: list(T), P(l)`` split into its base and step obligations."""

    goal: Formula
    variable: Var
    predicate: Formula
    head: Const
    tail: Const

    def at(self, term: Term) -> Formula:
        """``P(term)``."""
        return substitute(self.predicate, {self.variable: term})

    @property
    def base(self) -> Formula:
        return self.at(Fn(NIL_SYMBOL, (), self.variable.sort))

    def step_for(self, head: Term, tail: Term) -> tuple[Formula, Formula]:
        """Hypothesis ``P(tail)`` and goal ``P(head :: tail)``."""
        cons = Fn(CONS_SYMBOL, (head, tail), self.variable.sort)
        return self.at(tail), self.at(cons)

    @property
    def step(self) -> tuple[Formula, Formula]:
        return self.step_for(self.head, self.tail)


def induction_scheme(goal: Formula) -> InductionScheme:
    """Build the list induction scheme for ``goal``.

    Raises ``NotInductiveError`` unless the outermost binder ranges over a list sort.
    """
    msg = f"Induction needs a goal quantified over a list first: {format_kernel(goal)}"
    if not isinstance(goal, Forall):
        raise NotInductiveError(msg)
    variable, *rest = goal.vars
    sort = variable.sort
    if not isinstance(sort, ast.ListType):
        raise NotInductiveError(msg)
    predicate = forall(tuple(rest), goal.body)
    used = {const.name for const in constants(goal)}
    used |= {term.name for term in formula_terms(goal) if isinstance(term, Var)}
    head_name = fresh_name("h", used)
    used.add(head_name)
    tail_name = fresh_name("t", used)
    return InductionScheme(
        goal=goal,
        variable=variable,
        predicate=predicate,
        head=Const(head_name, sort.element),
        tail=Const(tail_name, sort),
    )
