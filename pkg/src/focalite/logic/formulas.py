"""Kernel terms and formulas.

Sorts are surface types with ``Self`` already resolved. Bound variables are
``Var``; rigid names introduced by proofs and by the prover are ``Const``.
"""

from collections.abc import Iterator
from dataclasses import dataclass

from focalite.syntax.ast import TypeExpr
from focalite.syntax.printer import format_type


@dataclass(frozen=True, slots=True)
class Var:
    name: str
    sort: TypeExpr


@dataclass(frozen=True, slots=True)
class Const:
    name: str
    sort: TypeExpr


@dataclass(frozen=True, slots=True)
class Fn:
    symbol: str
    args: tuple["Term", ...]
    sort: TypeExpr


type Term = Var | Const | Fn


@dataclass(frozen=True, slots=True)
class Truth:
    value: bool


@dataclass(frozen=True, slots=True)
class Pred:
    symbol: str
    args: tuple[Term, ...]


@dataclass(frozen=True, slots=True)
class Equals:
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    vars: tuple[Var, ...]
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Exists:
    vars: tuple[Var, ...]
    body: "Formula"


type Atom = Pred | Equals
type Formula = Truth | Pred | Equals | Not | And | Or | Implies | Iff | Forall | Exists

TRUE = Truth(value=True)
FALSE = Truth(value=False)
NIL_SYMBOL = "[]"
CONS_SYMBOL = "::"


def conjoin(formulas: tuple[Formula, ...]) -> Formula:
    if not formulas:
        return TRUE
    result = formulas[-1]
    for formula in reversed(formulas[:-1]):
        result = And(formula, result)
    return result


def implies_all(antecedents: tuple[Formula, ...], goal: Formula) -> Formula:
    """``a1 -> a2 -> ... -> goal``."""
    result = goal
    for antecedent in reversed(antecedents):
        result = Implies(antecedent, result)
    return result


def forall(vars_: tuple[Var, ...], body: Formula) -> Formula:
    return Forall(vars_, body) if vars_ else body


def is_ground(term: Term) -> bool:
    match term:
        case Var():
            return False
        case Const():
            return True
        case Fn(_, args, _):
            return all(is_ground(arg) for arg in args)


def term_vars(term: Term) -> Iterator[Var]:
    match term:
        case Var():
            yield term
        case Const():
            return
        case Fn(_, args, _):
            for arg in args:
                yield from term_vars(arg)


def subterms(term: Term) -> Iterator[Term]:
    """Post-order traversal; arguments come before the application."""
    if isinstance(term, Fn):
        for arg in term.args:
            yield from subterms(arg)
    yield term


def atom_args(formula: Formula) -> tuple[Term, ...]:
    if isinstance(formula, Pred):
        return formula.args
    if isinstance(formula, Equals):
        return (formula.left, formula.right)
    return ()


def children(formula: Formula) -> tuple[Formula, ...]:
    match formula:
        case Not(operand):
            return (operand,)
        case And(left, right) | Or(left, right) | Implies(left, right) | Iff(left, right):
            return (left, right)
        case Forall(_, body) | Exists(_, body):
            return (body,)
        case _:
            return ()


def formula_terms(formula: Formula) -> Iterator[Term]:
    """Every term occurring in an atom of the formula, bound or not."""
    for arg in atom_args(formula):
        yield from subterms(arg)
    for child in children(formula):
        yield from formula_terms(child)


def free_vars(formula: Formula) -> tuple[Var, ...]:
    seen: dict[Var, None] = {}
    _collect_free(formula, frozenset(), seen)
    return tuple(seen)


def _collect_free(formula: Formula, bound: frozenset[Var], seen: dict[Var, None]) -> None:
    if isinstance(formula, Forall | Exists):
        _collect_free(formula.body, bound | set(formula.vars), seen)
        return
    for arg in atom_args(formula):
        for var in term_vars(arg):
            if var not in bound:
                seen.setdefault(var)
    for child in children(formula):
        _collect_free(child, bound, seen)


def constants(formula: Formula) -> tuple[Const, ...]:
    seen: dict[Const, None] = {}
    for term in formula_terms(formula):
        if isinstance(term, Const):
            seen.setdefault(term)
    return tuple(seen)


# Alpha-equivalence

type _Key = tuple[object, ...]


def _term_key(term: Term, scope: dict[Var, int]) -> _Key:
    match term:
        case Var():
            index = scope.get(term)
            return ("bound", index) if index is not None else ("free", term.name)
        case Const(name, _):
            return ("const", name)
        case Fn(symbol, args, _):
            return ("fn", symbol, tuple(_term_key(arg, scope) for arg in args))


def _formula_key(formula: Formula, scope: dict[Var, int]) -> _Key:
    match formula:
        case Truth(value):
            return ("truth", value)
        case Pred(symbol, args):
            return ("pred", symbol, tuple(_term_key(arg, scope) for arg in args))
        case Equals(left, right):
            return ("eq", _term_key(left, scope), _term_key(right, scope))
        case Forall(vars_, body) | Exists(vars_, body):
            inner = dict(scope)
            for var in vars_:
                inner[var] = len(inner)
            tag = "forall" if isinstance(formula, Forall) else "exists"
            sorts = tuple(format_type(var.sort) for var in vars_)
            return (tag, sorts, _formula_key(body, inner))
        case _:
            return (
                type(formula).__name__,
                tuple(_formula_key(child, scope) for child in children(formula)),
            )


def alpha_key(formula: Formula) -> _Key:
    """Hashable key equal for exactly the alpha-equivalent formulas."""
    return _formula_key(formula, {})


def alpha_equal(left: Formula, right: Formula) -> bool:
    return alpha_key(left) == alpha_key(right)


# Rendering


def format_term(term: Term) -> str:
    match term:
        case Var(name, _) | Const(name, _):
            return name
        case Fn(symbol, args, _):
            if symbol == CONS_SYMBOL:
                return f"{format_term(args[0])} :: {format_term(args[1])}"
            if symbol in {"+", "-"}:
                return f"({format_term(args[0])} {symbol} {format_term(args[1])})"
            if not args:
                return symbol
            return f"{symbol}({', '.join(format_term(arg) for arg in args)})"


def format_kernel(formula: Formula) -> str:
    match formula:
        case Truth(value):
            return "true" if value else "false"
        case Pred(symbol, args):
            if not args:
                return symbol
            return f"{symbol}({', '.join(format_term(arg) for arg in args)})"
        case Equals(left, right):
            return f"{format_term(left)} = {format_term(right)}"
        case Not(operand):
            return f"not {_wrapped(operand)}"
        case And(left, right):
            return f"{_wrapped(left)} /\\ {_wrapped(right)}"
        case Or(left, right):
            return f"{_wrapped(left)} \\/ {_wrapped(right)}"
        case Implies(left, right):
            return f"{_wrapped(left)} -> {_wrapped(right)}"
        case Iff(left, right):
            return f"{_wrapped(left)} <-> {_wrapped(right)}"
        case Forall(vars_, body) | Exists(vars_, body):
            keyword = "all" if isinstance(formula, Forall) else "ex"
            binders = ", ".join(f"{var.name} : {format_type(var.sort)}" for var in vars_)
            return f"({keyword} {binders}, {format_kernel(body)})"


def _wrapped(formula: Formula) -> str:
    text = format_kernel(formula)
    if isinstance(formula, Pred | Equals | Truth | Not | Forall | Exists):
        return text
    return f"({text})"
