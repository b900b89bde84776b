import pytest

from focalite.evaluator.budget import EvalBudget
from focalite.evaluator.interpreter import Interpreter, evaluate
from focalite.evaluator.values import IntValue, OpaqueValue, format_value, from_python
from focalite.exceptions import (
    EvalTargetError,
    FocaliteError,
    FuelExhaustedError,
    MatchFailureError,
    RuntimeTypeError,
)
from focalite.session import Workspace, evaluate_expression, load
from focalite.syntax import parse_expr
from tests.fixtures.sources import int_workspace, source

PARTIAL = """
species Heads =
  representation = int;
  let first(l : list(int)) : int = match l with
    | h :: _ -> h;
end;;
collection Firsts = implement Heads; end;;
"""


def partial_workspace() -> Workspace:
    return load((source(PARTIAL),))


@pytest.mark.parametrize(
    ("expression", "expected"),
    [
        ("cardinal(from_list([]))", "0"),
        ("belongs(1, from_list([]))", "false"),
        ("release(from_list([1; 2; 1]), 1)", "[2]"),
        ("cardinal(from_list([4; 4; 5]))", "3"),
        ("belongs(5, from_list([4; 5]))", "true"),
        ("equal(from_list([1; 2]), from_list([2; 1; 2]))", "true"),
        ("different(from_list([1]), empty)", "true"),
        ("empty", "[]"),
        ("IntSetoid!equal(3, 3)", "true"),
        ("if belongs(2, from_list([2])) then 1 + 1 else 0", "2"),
    ],
)
def test_expressions(expression: str, expected: str) -> None:
    value = evaluate_expression(int_workspace(), "IntFiniteParts", expression)
    assert format_value(value) == expected


def test_results_leaving_a_collection_are_abstract() -> None:
    value = evaluate_expression(int_workspace(), "IntFiniteParts", "from_list([7])")
    assert isinstance(value, OpaqueValue)
    assert value.collection == "IntFiniteParts"
    assert format_value(value, abstract=True) == "<IntFiniteParts [<IntSetoid 7>]>"


def test_abstract_values_flow_back_in() -> None:
    collections = int_workspace().env.collections
    interpreter = Interpreter(collections)
    parts = interpreter.evaluate("IntFiniteParts", "from_list", (from_python([1, 2]),))
    cardinal = interpreter.evaluate("IntFiniteParts", "cardinal", (parts,))
    assert cardinal == IntValue(2)


def test_long_lists_are_walked_without_copying() -> None:
    interpreter = Interpreter(int_workspace().env.collections)
    size = 20_000
    parts = interpreter.evaluate("IntFiniteParts", "from_list", (from_python(list(range(size))),))
    assert interpreter.evaluate("IntFiniteParts", "cardinal", (parts,)) == IntValue(size)
    assert interpreter.budget.fuel - interpreter.fuel == size + 1


def test_fuel_runs_out() -> None:
    with pytest.raises(FuelExhaustedError):
        evaluate_expression(
            int_workspace(),
            "IntFiniteParts",
            "cardinal(from_list([1; 2; 3; 4; 5]))",
            EvalBudget(fuel=3),
        )


def test_match_failure() -> None:
    workspace = partial_workspace()
    assert workspace.ok
    assert format_value(evaluate_expression(workspace, "Firsts", "first([8; 9])")) == "8"
    with pytest.raises(MatchFailureError):
        evaluate_expression(workspace, "Firsts", "first([])")


def test_foreign_abstract_value_is_rejected() -> None:
    foreign = OpaqueValue("IntSetoid", IntValue(1))
    with pytest.raises(RuntimeTypeError):
        evaluate(int_workspace().env.collections, "IntFiniteParts", "cardinal", (foreign,))


def test_wrong_shape_is_rejected() -> None:
    with pytest.raises(RuntimeTypeError):
        evaluate_expression(int_workspace(), "IntFiniteParts", "cardinal(true)")


@pytest.mark.parametrize(
    ("collection", "method"),
    [
        ("Nowhere", "equal"),
        ("IntFiniteParts", "release_spec"),
        ("IntFiniteParts", "missing"),
    ],
)
def test_bad_targets(collection: str, method: str) -> None:
    with pytest.raises(EvalTargetError):
        evaluate(int_workspace().env.collections, collection, method, ())


def test_unknown_collection_for_expressions() -> None:
    with pytest.raises(EvalTargetError) as error:
        evaluate_expression(int_workspace(), "Nowhere", "1")
    assert isinstance(error.value, FocaliteError)
    assert error.value.error.code == "E-EVAL-TARGET"


def calls_made(expression: str) -> tuple[str, int]:
    """Rendered result and number of method calls, each of which costs one unit of fuel."""
    interpreter = Interpreter(int_workspace().env.collections)
    value = interpreter.eval_expr("IntFiniteParts", parse_expr(expression))
    return format_value(value), interpreter.budget.fuel - interpreter.fuel


@pytest.mark.parametrize(
    ("expression", "expected"),
    [
        ("false && belongs(1, from_list([1; 2]))", "false"),
        ("true || belongs(1, from_list([1; 2]))", "true"),
        ("not true && cardinal(empty) = 0", "false"),
    ],
)
def test_boolean_operators_short_circuit(expression: str, expected: str) -> None:
    assert calls_made(expression) == (expected, 0)


def test_right_operand_is_evaluated_when_needed() -> None:
    value, calls = calls_made("true && belongs(1, from_list([1; 2]))")
    assert value == "true"
    assert calls > 0
