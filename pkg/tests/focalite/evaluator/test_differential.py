"""Definitional axioms agree with the interpreter on random ground instances."""

import random

import pytest

from focalite.evaluator.interpreter import Interpreter
from focalite.evaluator.values import BoolValue, IntValue, ListValue, Value, format_value
from focalite.logic.axioms import unfold_definition
from focalite.logic.convert import Converter
from focalite.logic.formulas import Const, Forall, Formula, constants
from focalite.logic.substitution import instantiate
from focalite.session import evaluate_expression
from focalite.syntax import ast
from tests.fixtures.sources import int_workspace

INSTANCES = 200


def random_value(rng: random.Random, sort: ast.TypeExpr, carrier: ast.TypeExpr) -> Value:
    match sort:
        case ast.SelfType():
            return random_value(rng, carrier, carrier)
        case ast.BoolType():
            return BoolValue(rng.random() < 0.5)  # noqa: PLR2004
        case ast.ListType(element):
            size = rng.randrange(4)
            return ListValue.of(random_value(rng, element, carrier) for _ in range(size))
        case _:
            return IntValue(rng.randrange(3))


def ground(axiom: Formula) -> Formula:
    if not isinstance(axiom, Forall):
        return axiom
    return instantiate(axiom, tuple(Const(var.name, var.sort) for var in axiom.vars))


@pytest.mark.parametrize(
    ("collection", "method"),
    [
        ("IntFiniteParts", "belongs"),
        ("IntFiniteParts", "included"),
        ("IntFiniteParts", "release"),
        ("IntFiniteParts", "cardinal"),
        ("IntFiniteParts", "equal"),
        ("IntFiniteParts", "different"),
        ("IntSetoid", "equal"),
        ("IntSetoid", "different"),
    ],
)
def test_axioms_hold_under_evaluation(collection: str, method: str) -> None:
    workspace = int_workspace()
    implementation = workspace.env.collections[collection].implementation()
    carrier = implementation.carrier
    assert carrier is not None
    axioms = unfold_definition(method, Converter(implementation, workspace.env))
    interpreter = Interpreter(workspace.env.collections)
    rng = random.Random(f"{collection}.{method}")  # noqa: S311
    for axiom in axioms:
        instance = ground(axiom.axiom)
        for _ in range(INSTANCES):
            assignment = {
                const.name: random_value(rng, const.sort, carrier)
                for const in constants(instance)
            }
            assert interpreter.evaluate_formula(collection, instance, assignment), (
                axiom,
                {name: format_value(value) for name, value in assignment.items()},
            )


def test_release_matches_list_filtering() -> None:
    workspace = int_workspace()
    rng = random.Random(7)  # noqa: S311
    for _ in range(500):
        items = [rng.randrange(5) for _ in range(rng.randrange(11))]
        kept, removed = rng.randrange(5), rng.randrange(5)
        listed = "; ".join(str(item) for item in items)
        expression = f"belongs({kept}, release(from_list([{listed}]), {removed}))"
        value = evaluate_expression(workspace, "IntFiniteParts", expression)
        assert value == BoolValue(kept != removed and kept in items), expression


@pytest.mark.parametrize(
    "template",
    [
        "cardinal(from_list([{first}]))",
        "belongs(0, from_list([{first}]))",
        "release(from_list([{first}]), 0)",
        "included(from_list([{first}]), from_list([{second}]))",
        "equal(from_list([{first}]), from_list([{second}]))",
    ],
)
def test_recursive_methods_finish_on_lists_up_to_fifty(template: str) -> None:
    workspace = int_workspace()
    rng = random.Random(template)  # noqa: S311
    for size in (*range(0, 50, 7), 50):
        first = "; ".join(str(rng.randrange(1, 9)) for _ in range(size))
        second = "; ".join(str(rng.randrange(1, 9)) for _ in range(size))
        expression = template.format(first=first, second=second)
        evaluate_expression(workspace, "IntFiniteParts", expression)
