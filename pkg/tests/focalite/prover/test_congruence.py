from focalite.logic.formulas import CONS_SYMBOL, NIL_SYMBOL, Const, Fn, Term
from focalite.prover.congruence import CongruenceClosure, is_constructor
from focalite.syntax import ast

INT = ast.IntType()
INT_LIST = ast.ListType(INT)
A = Const("a", INT)
B = Const("b", INT)
T = Const("t", INT_LIST)
U = Const("u", INT_LIST)
NIL = Fn(NIL_SYMBOL, (), INT_LIST)


def f(term: Term) -> Fn:
    return Fn("f", (term,), INT)


def cons(head: Term, tail: Term) -> Fn:
    return Fn(CONS_SYMBOL, (head, tail), INT_LIST)


def literal(value: int) -> Fn:
    return Fn(str(value), (), INT)


def test_merging_arguments_merges_applications() -> None:
    closure = CongruenceClosure()
    closure.add(f(f(A)))
    closure.add(f(B))
    closure.merge(A, B)
    assert closure.equal(f(A), f(B))
    assert not closure.equal(f(f(A)), f(A))
    assert not closure.inconsistent


def test_representative_is_earliest_member() -> None:
    closure = CongruenceClosure()
    closure.add(B)
    closure.merge(A, B)
    assert closure.find(A) == B
    assert set(closure.classes()[B]) == {A, B}


def test_constructor_clash_is_inconsistent() -> None:
    closure = CongruenceClosure()
    closure.merge(NIL, cons(A, T))
    assert closure.inconsistent


def test_distinct_literals() -> None:
    closure = CongruenceClosure()
    assert closure.distinct(literal(1), literal(2))
    assert not closure.distinct(literal(1), A)
    closure.merge(A, literal(1))
    assert closure.distinct(A, literal(2))
    closure.merge(A, literal(2))
    assert closure.inconsistent


def test_cons_is_injective() -> None:
    closure = CongruenceClosure()
    closure.merge(cons(A, T), cons(B, U))
    assert closure.equal(A, B)
    assert closure.equal(T, U)
    assert not closure.inconsistent


def test_copy_is_independent() -> None:
    closure = CongruenceClosure()
    closure.add(A)
    closure.add(B)
    other = closure.copy()
    other.merge(A, B)
    assert other.equal(A, B)
    assert not closure.equal(A, B)


def test_constructors() -> None:
    assert is_constructor(NIL)
    assert is_constructor(cons(A, T))
    assert is_constructor(literal(-3))
    assert is_constructor(Fn("true", (), ast.BoolType()))
    assert not is_constructor(f(A))
    assert not is_constructor(A)
