import pytest

from focalite.corpus import corpus_text, load_manifest
from focalite.syntax import parse_expr, parse_formula, parse_unit, pretty_print
from focalite.syntax.printer import format_expr, format_formula


@pytest.mark.parametrize("file", load_manifest().files)
def test_corpus_reparses_to_the_same_tree(file: str) -> None:
    unit = parse_unit(corpus_text(file), file)
    printed = pretty_print(unit)
    assert parse_unit(printed, file) == unit


@pytest.mark.parametrize("file", load_manifest().files)
def test_printing_is_idempotent(file: str) -> None:
    printed = pretty_print(parse_unit(corpus_text(file), file))
    assert pretty_print(parse_unit(printed, file)) == printed


@pytest.mark.parametrize(
    "text",
    [
        "if S!equal(s, h) then release(t, s) else h :: release(t, s)",
        "(a || b) && not (c)",
        "1 + (2 - 3)",
        "let x = f(y) in x :: []",
        "match l with | [] -> false | h :: q -> S!equal(h, x) || belongs(x, q)",
    ],
)
def test_expression_round_trip(text: str) -> None:
    expr = parse_expr(text)
    assert parse_expr(format_expr(expr)) == expr


@pytest.mark.parametrize(
    "text",
    [
        "all x : Self, all t1 t2 : S, p(x) <-> (q(t1) /\\ r(t2))",
        "(p(x) -> q(x)) -> r(x)",
        "not (p(x) \\/ q(x))",
        "ex a : A, relation(r, a, b)",
    ],
)
def test_formula_round_trip(text: str) -> None:
    formula = parse_formula(text)
    assert parse_formula(format_formula(formula)) == formula
