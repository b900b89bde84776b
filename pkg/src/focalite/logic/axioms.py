"""Definitional axioms extracted from function and logical definitions."""

import itertools
import logging
from dataclasses import dataclass

from focalite.exceptions import NotDefinedError, UnknownCitationError, UnsupportedError
from focalite.logic.convert import Converter
from focalite.logic.formulas import (
    CONS_SYMBOL,
    NIL_SYMBOL,
    Equals,
    Fn,
    Formula,
    Iff,
    Not,
    Pred,
    Term,
    Var,
    forall,
    implies_all,
    term_vars,
)
from focalite.logic.substitution import fresh_name, subst_term
from focalite.species.model import MethodKind
from focalite.species.types import signature_parts
from focalite.syntax import ast

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class DefAxiom:
    source: str
    axiom: Formula


@dataclass(frozen=True, slots=True)
class _Case:
    """One defining clause: the arguments of the left-hand side and the body to translate."""

    args: tuple[Term, ...]
    scope: dict[str, Term]
    body: ast.Expr


type _Lifted = tuple[tuple[Formula, ...], Term]


def _covers(pattern: ast.Pattern, constructor: str) -> bool:
    match pattern:
        case ast.PNil():
            return constructor == NIL_SYMBOL
        case ast.PCons():
            return constructor == CONS_SYMBOL
        case _:
            return True


class _Unfolder:
    def __init__(self, name: str, converter: Converter) -> None:
        self.name = name
        self.converter = converter
        self.used: set[str] = set()

    def _fresh(self, base: str) -> str:
        name = fresh_name(base, self.used)
        self.used.add(name)
        return name

    def _var(self, base: str, sort: ast.TypeExpr) -> Var:
        return Var(self._fresh(base), sort)

    def cases(self, case: _Case) -> list[_Case]:
        body = case.body
        if not isinstance(body, ast.Match) or not isinstance(body.scrutinee, ast.Var):
            return [case]
        target = case.scope.get(body.scrutinee.name)
        if not isinstance(target, Var):
            return [case]
        sort = target.sort
        if not isinstance(sort, ast.ListType):
            return self._bind_only(case, body, target)
        result: list[_Case] = []
        for constructor in (NIL_SYMBOL, CONS_SYMBOL):
            branch = next((b for b in body.branches if _covers(b.pattern, constructor)), None)
            if branch is None:
                continue
            result.extend(self.cases(self._destructure(case, target, sort, branch, constructor)))
        return result

    def _bind_only(self, case: _Case, body: ast.Match, target: Var) -> list[_Case]:
        branch = body.branches[0]
        scope = dict(case.scope)
        if isinstance(branch.pattern, ast.PVar):
            scope[branch.pattern.name] = target
        elif not isinstance(branch.pattern, ast.PWild):
            raise UnsupportedError(f"list pattern on a non-list value in {self.name}", body.span)
        return self.cases(_Case(case.args, scope, branch.body))

    def _destructure(
        self,
        case: _Case,
        target: Var,
        sort: ast.ListType,
        branch: ast.MatchBranch,
        constructor: str,
    ) -> _Case:
        pattern = branch.pattern
        bindings: dict[str, Term] = {}
        if constructor == NIL_SYMBOL:
            replacement: Term = Fn(NIL_SYMBOL, (), sort)
        else:
            head_name, tail_name = (
                (pattern.head, pattern.tail) if isinstance(pattern, ast.PCons) else ("h", "t")
            )
            head = self._var("h" if head_name == "_" else head_name, sort.element)
            tail = self._var("t" if tail_name == "_" else tail_name, sort)
            replacement = Fn(CONS_SYMBOL, (head, tail), sort)
            if isinstance(pattern, ast.PCons):
                bindings = {n: v for n, v in ((head_name, head), (tail_name, tail)) if n != "_"}
        if isinstance(pattern, ast.PVar):
            bindings[pattern.name] = replacement
        mapping = {target: replacement}
        scope = {key: subst_term(value, mapping) for key, value in case.scope.items()}
        args = tuple(subst_term(arg, mapping) for arg in case.args)
        return _Case(args, scope | bindings, branch.body)

    def lift(self, expr: ast.Expr, scope: dict[str, Term]) -> list[_Lifted]:
        converter = self.converter
        match expr:
            case ast.If(cond, then, otherwise):
                condition = converter.to_bool(cond, scope)
                positive = [((condition, *g), t) for g, t in self.lift(then, scope)]
                negative = [((Not(condition), *g), t) for g, t in self.lift(otherwise, scope)]
                return positive + negative
            case ast.LocalLet(name, bound, body):
                return [
                    (guards + inner_guards, term)
                    for guards, value in self.lift(bound, scope)
                    for inner_guards, term in self.lift(body, {**scope, name: value})
                ]
            case ast.App(args=args) | ast.QualifiedCall(args=args) if args:
                return self._lift_args(expr, args, scope)
            case ast.ListCons(head, tail):
                return self._lift_args(expr, (head, tail), scope)
            case ast.BinOp(op, left, right) if op is not ast.BinaryOp.EQ:
                return self._lift_args(expr, (left, right), scope)
            case ast.Match(span=span):
                raise UnsupportedError(f"nested match in the definition of {self.name}", span)
            case _:
                return [((), converter.to_term(expr, scope))]

    def _lift_args(
        self,
        expr: ast.Expr,
        args: tuple[ast.Expr, ...],
        scope: dict[str, Term],
    ) -> list[_Lifted]:
        per_arg = [self.lift(arg, scope) for arg in args]
        if all(len(options) == 1 and not options[0][0] for options in per_arg):
            return [((), self.converter.to_term(expr, scope))]
        result: list[_Lifted] = []
        for combination in itertools.product(*per_arg):
            guards = tuple(g for option in combination for g in option[0])
            placeholders = {f"%{index}": option[1] for index, option in enumerate(combination)}
            rebuilt = _with_placeholders(expr, tuple(placeholders))
            result.append((guards, self.converter.to_term(rebuilt, scope | placeholders)))
        return result


def _with_placeholders(expr: ast.Expr, names: tuple[str, ...]) -> ast.Expr:
    holes = tuple(ast.Var(name, expr.span) for name in names)
    match expr:
        case ast.App(callee, _, span):
            return ast.App(callee, holes, span)
        case ast.QualifiedCall(owner, method, _, span):
            return ast.QualifiedCall(owner, method, holes, span)
        case ast.ListCons(span=span):
            return ast.ListCons(holes[0], holes[1], span)
        case ast.BinOp(op, span=span):
            return ast.BinOp(op, holes[0], holes[1], span)
        case _:
            return expr


def _ordered_vars(terms: tuple[Term, ...]) -> tuple[Var, ...]:
    seen: dict[Var, None] = {}
    for term in terms:
        for var in term_vars(term):
            seen.setdefault(var, None)
    return tuple(seen)


def unfold_definition(name: str, converter: Converter) -> tuple[DefAxiom, ...]:
    """Return the defining axioms of a function or logical definition.

    Logical definitions and boolean functions give equivalences, one per
    constructor case of a top-level match; other functions give one equation
    per case, split further into guarded equations for each ``if``.
    """
    flat = converter.flat
    entry = flat.entry(name)
    if entry is None or entry.kind is MethodKind.STATEMENT:
        raise UnknownCitationError(name)
    definition = entry.definition
    if definition is None or entry.type is None:
        raise NotDefinedError(name)
    unfolder = _Unfolder(name, converter)
    arg_types, result_type = signature_parts(converter.norm(entry.type))
    unfolder.used.update(param.name for param in definition.params)
    params = tuple(
        Var(param.name, sort) for param, sort in zip(definition.params, arg_types, strict=True)
    )
    scope: dict[str, Term] = {var.name: var for var in params}
    if isinstance(definition, ast.LogicalLet):
        body = converter.to_formula(definition.body, scope)
        axiom = forall(params, Iff(Pred(name, params), body))
        return (DefAxiom(name, converter.finish(axiom)),)
    axioms: list[DefAxiom] = []
    for case in unfolder.cases(_Case(params, scope, definition.body)):
        vars_ = _ordered_vars(case.args)
        if isinstance(result_type, ast.BoolType):
            body = converter.to_bool(case.body, case.scope)
            axioms.append(DefAxiom(name, forall(vars_, Iff(Pred(name, case.args), body))))
            continue
        lhs = Fn(name, case.args, result_type)
        for guards, rhs in unfolder.lift(case.body, case.scope):
            converter.unify(result_type, rhs.sort, f"body of {name}", definition.span)
            equation = implies_all(guards, Equals(lhs, rhs))
            axioms.append(DefAxiom(name, forall(vars_, equation)))
    LOGGER.debug("Unfolded %s into %s axioms", name, len(axioms))
    return tuple(DefAxiom(a.source, converter.finish(a.axiom)) for a in axioms)
