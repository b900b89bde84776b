"""Translation of surface formulas and expressions into kernel formulas and terms."""

from collections.abc import Mapping

from focalite._diagnostics.errors import Span
from focalite.exceptions import (
    FocaliteError,
    TypeCheckError,
    UnboundNameError,
    UnsupportedError,
)
from focalite.logic.formulas import (
    CONS_SYMBOL,
    NIL_SYMBOL,
    And,
    Const,
    Equals,
    Exists,
    Fn,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Pred,
    Term,
    Truth,
    Var,
)
from focalite.species.flatten import SpeciesEnv
from focalite.species.model import FlatSpecies, MethodKind
from focalite.species.typecheck import Typer
from focalite.species.types import Unifier
from focalite.syntax import ast

type TermScope = Mapping[str, Term]


def _resolve_term(term: Term, unifier: Unifier) -> Term:
    match term:
        case Var(name, sort):
            return Var(name, unifier.resolve(sort))
        case Const(name, sort):
            return Const(name, unifier.resolve(sort))
        case Fn(symbol, args, sort):
            resolved = tuple(_resolve_term(arg, unifier) for arg in args)
            return Fn(symbol, resolved, unifier.resolve(sort))


def resolve_sorts(formula: Formula, unifier: Unifier) -> Formula:  # noqa: PLR0911
    match formula:
        case Truth():
            return formula
        case Pred(symbol, args):
            return Pred(symbol, tuple(_resolve_term(arg, unifier) for arg in args))
        case Equals(left, right):
            return Equals(_resolve_term(left, unifier), _resolve_term(right, unifier))
        case Not(operand):
            return Not(resolve_sorts(operand, unifier))
        case And(left, right):
            return And(resolve_sorts(left, unifier), resolve_sorts(right, unifier))
        case Or(left, right):
            return Or(resolve_sorts(left, unifier), resolve_sorts(right, unifier))
        case Implies(left, right):
            return Implies(resolve_sorts(left, unifier), resolve_sorts(right, unifier))
        case Iff(left, right):
            return Iff(resolve_sorts(left, unifier), resolve_sorts(right, unifier))
        case Forall(vars_, body):
            return Forall(
                tuple(Var(v.name, unifier.resolve(v.sort)) for v in vars_),
                resolve_sorts(body, unifier),
            )
        case Exists(vars_, body):
            return Exists(
                tuple(Var(v.name, unifier.resolve(v.sort)) for v in vars_),
                resolve_sorts(body, unifier),
            )


class Converter:
    """Builds kernel objects for one species; sorts are inferred while translating."""

    def __init__(self, flat: FlatSpecies, env: SpeciesEnv) -> None:
        self.flat = flat
        self.env = env
        self.unifier = Unifier()
        self.typer = Typer(flat, env, self.unifier)

    def norm(self, type_: ast.TypeExpr) -> ast.TypeExpr:
        return self.typer.norm(type_)

    def finish(self, formula: Formula) -> Formula:
        return resolve_sorts(formula, self.unifier)

    def finish_term(self, term: Term) -> Term:
        return _resolve_term(term, self.unifier)

    # Entry points

    def formula(self, formula: ast.Formula, scope: TermScope | None = None) -> Formula:
        return self.finish(self.to_formula(formula, dict(scope or {})))

    def term(self, expr: ast.Expr, scope: TermScope | None = None) -> Term:
        return self.finish_term(self.to_term(expr, dict(scope or {})))

    # Helpers

    def unify(self, expected: ast.TypeExpr, found: ast.TypeExpr, context: str, span: Span) -> None:
        self.typer.unify_at(expected, found, context, span)

    def _callee(self, name: str, span: Span) -> tuple[MethodKind, ast.TypeExpr]:
        if "!" in name:
            owner, method = name.split("!", 1)
            return self.typer.qualified_type(owner, method, span)
        found = self.typer.method_type(name)
        if found is None:
            raise UnboundNameError(name, span)
        return found

    def _apply(
        self,
        name: str,
        args: tuple[ast.Expr, ...],
        scope: dict[str, Term],
        span: Span,
    ) -> tuple[tuple[Term, ...], ast.TypeExpr]:
        _, type_ = self._callee(name, span)
        type_ = self.unifier.resolve(type_)
        if not args:
            if isinstance(type_, ast.Arrow):
                raise UnsupportedError(f"function {name} used as a value in a formula", span)
            return (), type_
        if not isinstance(type_, ast.Arrow) or len(type_.args) != len(args):
            msg = f"{name} applied to {len(args)} arguments"
            raise TypeCheckError(msg, span)
        terms = tuple(self.to_term(arg, scope) for arg in args)
        for index, (expected, term) in enumerate(zip(type_.args, terms, strict=True)):
            self.unify(expected, term.sort, f"argument {index + 1} of {name}", span)
        return terms, type_.result

    # Terms

    def to_term(self, expr: ast.Expr, scope: dict[str, Term]) -> Term:  # noqa: C901, PLR0911
        match expr:
            case ast.Var(name, span):
                if name in scope:
                    return scope[name]
                args, sort = self._apply(name, (), scope, span)
                return Fn(name, args, sort)
            case ast.IntLit(value):
                return Fn(str(value), (), ast.IntType())
            case ast.BoolLit(value):
                return Fn("true" if value else "false", (), ast.BoolType())
            case ast.App(callee, args, span):
                if callee in scope:
                    raise UnsupportedError(f"call of the local function {callee}", span)
                terms, sort = self._apply(callee, args, scope, span)
                return Fn(callee, terms, sort)
            case ast.QualifiedCall(owner, method, args, span):
                name = f"{owner}!{method}"
                terms, sort = self._apply(name, args, scope, span)
                return Fn(name, terms, sort)
            case ast.ListNil():
                return Fn(NIL_SYMBOL, (), ast.ListType(self.unifier.fresh()))
            case ast.ListCons(head, tail, span):
                head_term = self.to_term(head, scope)
                tail_term = self.to_term(tail, scope)
                self.unify(ast.ListType(head_term.sort), tail_term.sort, "list tail", span)
                return Fn(CONS_SYMBOL, (head_term, tail_term), tail_term.sort)
            case ast.BinOp(op, left, right, span) if op is not ast.BinaryOp.EQ:
                terms = (self.to_term(left, scope), self.to_term(right, scope))
                for term in terms:
                    self.unify(ast.IntType(), term.sort, f"operand of {op.value}", span)
                return Fn(op.value, terms, ast.IntType())
            case ast.LocalLet(name, bound, body):
                return self.to_term(body, {**scope, name: self.to_term(bound, scope)})
            case _:
                raise UnsupportedError("conditional or boolean expression inside a term", expr.span)

    # Formulas

    def to_bool(self, expr: ast.Expr, scope: dict[str, Term]) -> Formula:  # noqa: PLR0911
        match expr:
            case ast.BoolLit(value):
                return Truth(value)
            case ast.BoolAnd(left, right):
                return And(self.to_bool(left, scope), self.to_bool(right, scope))
            case ast.BoolOr(left, right):
                return Or(self.to_bool(left, scope), self.to_bool(right, scope))
            case ast.BoolNot(operand):
                return Not(self.to_bool(operand, scope))
            case ast.BinOp(ast.BinaryOp.EQ, left, right, span):
                return self._equals(left, right, scope, span)
            case ast.If(cond, then, otherwise):
                condition = self.to_bool(cond, scope)
                return Or(
                    And(condition, self.to_bool(then, scope)),
                    And(Not(condition), self.to_bool(otherwise, scope)),
                )
            case ast.LocalLet(name, bound, body):
                return self.to_bool(body, {**scope, name: self.to_term(bound, scope)})
            case ast.App(callee, args, span) if callee not in scope:
                return self._predicate(callee, args, scope, span)
            case ast.QualifiedCall(owner, method, args, span):
                return self._predicate(f"{owner}!{method}", args, scope, span)
            case ast.Var(name, span) if name not in scope:
                return self._predicate(name, (), scope, span)
            case ast.Match(span=span):
                raise UnsupportedError("match inside a formula", span)
            case _:
                term = self.to_term(expr, scope)
                self.unify(ast.BoolType(), term.sort, "formula atom", expr.span)
                return Equals(term, Fn("true", (), ast.BoolType()))

    def _predicate(
        self,
        name: str,
        args: tuple[ast.Expr, ...],
        scope: dict[str, Term],
        span: Span,
    ) -> Formula:
        terms, sort = self._apply(name, args, scope, span)
        self.unify(ast.BoolType(), sort, f"result of {name}", span)
        return Pred(name, terms)

    def _equals(
        self,
        left: ast.Expr,
        right: ast.Expr,
        scope: dict[str, Term],
        span: Span,
    ) -> Formula:
        left_term = self.to_term(left, scope)
        right_term = self.to_term(right, scope)
        self.unify(left_term.sort, right_term.sort, "equality", span)
        return Equals(left_term, right_term)

    def to_formula(self, formula: ast.Formula, scope: dict[str, Term]) -> Formula:  # noqa: PLR0911
        try:
            match formula:
                case ast.All(names, type_, body) | ast.Ex(names, type_, body):
                    sort = self.norm(type_)
                    vars_ = tuple(Var(name, sort) for name in names)
                    inner = {**scope, **{var.name: var for var in vars_}}
                    kernel_body = self.to_formula(body, inner)
                    if isinstance(formula, ast.All):
                        return Forall(vars_, kernel_body)
                    return Exists(vars_, kernel_body)
                case ast.And(left, right):
                    return And(self.to_formula(left, scope), self.to_formula(right, scope))
                case ast.Or(left, right):
                    return Or(self.to_formula(left, scope), self.to_formula(right, scope))
                case ast.Implies(left, right):
                    return Implies(self.to_formula(left, scope), self.to_formula(right, scope))
                case ast.Iff(left, right):
                    return Iff(self.to_formula(left, scope), self.to_formula(right, scope))
                case ast.Not(operand):
                    return Not(self.to_formula(operand, scope))
                case ast.Eq(left, right, span):
                    return self._equals(left, right, scope, span)
                case ast.Atom(expr):
                    return self.to_bool(expr, scope)
        except FocaliteError as error:
            raise error.located(formula.span) from None
