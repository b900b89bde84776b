import pytest

from focalite.exceptions import NotInductiveError
from focalite.logic.formulas import (
    CONS_SYMBOL,
    NIL_SYMBOL,
    Const,
    Fn,
    Forall,
    Formula,
    Pred,
    Var,
)
from focalite.logic.induction import induction_scheme
from focalite.syntax import ast

INT = ast.IntType()
INT_LIST = ast.ListType(INT)
L = Var("l", INT_LIST)
N = Var("n", INT)


def test_scheme_splits_base_and_step() -> None:
    goal = Forall((L, N), Pred("p", (L, N)))
    scheme = induction_scheme(goal)
    nil = Fn(NIL_SYMBOL, (), INT_LIST)
    assert scheme.base == Forall((N,), Pred("p", (nil, N)))
    hypothesis, step_goal = scheme.step
    head, tail = scheme.head, scheme.tail
    assert head.sort == INT
    assert tail.sort == INT_LIST
    assert hypothesis == Forall((N,), Pred("p", (tail, N)))
    assert step_goal == Forall((N,), Pred("p", (Fn(CONS_SYMBOL, (head, tail), INT_LIST), N)))


def test_fresh_names_avoid_the_goal() -> None:
    taken = Const("h", INT)
    scheme = induction_scheme(Forall((L,), Pred("p", (L, taken))))
    assert scheme.head.name != "h"
    assert scheme.tail.name == "t"


@pytest.mark.parametrize(
    "goal",
    [
        Forall((N,), Pred("p", (N,))),
        Pred("p", (Const("c", INT_LIST),)),
    ],
)
def test_only_list_binders_are_inductive(goal: Formula) -> None:
    with pytest.raises(NotInductiveError):
        induction_scheme(goal)
