import dataclasses
import logging
from dataclasses import dataclass

from focalite._diagnostics.errors import Error, ErrorCode, Span
from focalite.exceptions import FocaliteError, TypeCheckError, TypeClashError, UnboundNameError
from focalite.species.flatten import SpeciesEnv
from focalite.species.model import FlatSpecies, MethodEntry, MethodKind
from focalite.species.termination import check_termination
from focalite.species.types import Unifier, normalize, replace_self, signature_parts
from focalite.syntax import ast
from focalite.syntax.printer import format_type

LOGGER = logging.getLogger(__name__)

type Scope = dict[str, ast.TypeExpr]


class Typer:
    """Type inference for expressions and formulas inside one flattened species."""

    def __init__(
        self,
        flat: FlatSpecies,
        env: SpeciesEnv,
        unifier: Unifier | None = None,
        method_types: dict[str, ast.TypeExpr] | None = None,
    ) -> None:
        self.flat = flat
        self.env = env
        self.unifier = unifier or Unifier()
        self.method_types = method_types if method_types is not None else {}
        self.warnings: list[Error] = []

    def norm(self, type_: ast.TypeExpr) -> ast.TypeExpr:
        return normalize(type_, self.flat.carrier)

    def method_type(self, name: str) -> tuple[MethodKind, ast.TypeExpr] | None:
        entry = self.flat.entry(name)
        if entry is None or entry.kind is MethodKind.STATEMENT:
            return None
        if name in self.method_types:
            return entry.kind, self.method_types[name]
        if entry.type is None:
            return None
        return entry.kind, self.norm(entry.type)

    def qualified_type(
        self,
        owner: str,
        method: str,
        span: Span,
    ) -> tuple[MethodKind, ast.TypeExpr]:
        entries = self.env.interface_entries(owner, self.flat.params)
        if entries is None:
            raise UnboundNameError(owner, span)
        entry = next((e for e in entries if e.name == method), None)
        if entry is None or entry.kind is MethodKind.STATEMENT or entry.type is None:
            raise UnboundNameError(f"{owner}!{method}", span)
        return entry.kind, replace_self(entry.type, ast.ParamRef(owner))

    def resolve(self, type_: ast.TypeExpr) -> ast.TypeExpr:
        return self.unifier.resolve(type_)

    # Expressions

    def _call(
        self,
        name: str,
        found: tuple[MethodKind, ast.TypeExpr],
        args: tuple[ast.Expr, ...],
        scope: Scope,
        span: Span,
        *,
        in_formula: bool,
    ) -> ast.TypeExpr:
        kind, type_ = found
        if kind is MethodKind.LOGICAL and not in_formula:
            raise TypeCheckError(f"Logical definition {name} used in a computation", span)
        type_ = self.resolve(type_)
        if isinstance(type_, ast.TypeVar):
            arrow = ast.Arrow(tuple(self.unifier.fresh() for _ in args), self.unifier.fresh())
            self.unifier.unify(type_, arrow, name)
            type_ = arrow
        if not isinstance(type_, ast.Arrow) or len(type_.args) != len(args):
            arity = len(type_.args) if isinstance(type_, ast.Arrow) else 0
            msg = f"{name} expects {arity} arguments, got {len(args)}"
            raise TypeCheckError(msg, span)
        for index, (expected, arg) in enumerate(zip(type_.args, args, strict=True)):
            found_type = self.infer(arg, scope, in_formula=in_formula)
            self.unify_at(expected, found_type, f"argument {index + 1} of {name}", span)
        return type_.result

    def unify_at(
        self,
        expected: ast.TypeExpr,
        found: ast.TypeExpr,
        context: str,
        span: Span,
    ) -> None:
        try:
            self.unifier.unify(expected, found, context)
        except TypeCheckError as error:
            raise error.located(span) from None

    def infer(  # noqa: C901, PLR0911, PLR0912
        self,
        expr: ast.Expr,
        scope: Scope,
        *,
        in_formula: bool = False,
    ) -> ast.TypeExpr:
        match expr:
            case ast.Var(name, span):
                if name in scope:
                    return scope[name]
                found = self.method_type(name)
                if found is None:
                    raise UnboundNameError(name, span)
                if found[0] is MethodKind.LOGICAL and not in_formula:
                    raise TypeCheckError(f"Logical definition {name} used in a computation", span)
                return found[1]
            case ast.IntLit():
                return ast.IntType()
            case ast.BoolLit():
                return ast.BoolType()
            case ast.App(callee, args, span):
                if callee in scope:
                    found = (MethodKind.FUNCTION, scope[callee])
                else:
                    method = self.method_type(callee)
                    if method is None:
                        raise UnboundNameError(callee, span)
                    found = method
                return self._call(callee, found, args, scope, span, in_formula=in_formula)
            case ast.QualifiedCall(owner, method, args, span):
                found = self.qualified_type(owner, method, span)
                name = f"{owner}!{method}"
                if not args:
                    return found[1]
                return self._call(name, found, args, scope, span, in_formula=in_formula)
            case ast.ListNil():
                return ast.ListType(self.unifier.fresh())
            case ast.ListCons(head, tail, span):
                element = self.infer(head, scope, in_formula=in_formula)
                rest = self.infer(tail, scope, in_formula=in_formula)
                self.unify_at(ast.ListType(element), rest, "list tail", span)
                return rest
            case ast.If(cond, then, otherwise, span):
                cond_type = self.infer(cond, scope, in_formula=in_formula)
                self.unify_at(ast.BoolType(), cond_type, "condition", span)
                result = self.infer(then, scope, in_formula=in_formula)
                other = self.infer(otherwise, scope, in_formula=in_formula)
                self.unify_at(result, other, "else branch", span)
                return result
            case ast.Match():
                return self._infer_match(expr, scope, in_formula=in_formula)
            case ast.LocalLet(name, bound, body):
                inner = {**scope, name: self.infer(bound, scope, in_formula=in_formula)}
                return self.infer(body, inner, in_formula=in_formula)
            case ast.BoolAnd(left, right, span) | ast.BoolOr(left, right, span):
                for side in (left, right):
                    found_type = self.infer(side, scope, in_formula=in_formula)
                    self.unify_at(ast.BoolType(), found_type, "boolean operand", span)
                return ast.BoolType()
            case ast.BoolNot(operand, span):
                found_type = self.infer(operand, scope, in_formula=in_formula)
                self.unify_at(ast.BoolType(), found_type, "boolean operand", span)
                return ast.BoolType()
            case ast.BinOp(op, left, right, span):
                left_type = self.infer(left, scope, in_formula=in_formula)
                right_type = self.infer(right, scope, in_formula=in_formula)
                if op is ast.BinaryOp.EQ:
                    self.unify_at(left_type, right_type, "equality", span)
                    return ast.BoolType()
                self.unify_at(ast.IntType(), left_type, f"operand of {op.value}", span)
                self.unify_at(ast.IntType(), right_type, f"operand of {op.value}", span)
                return ast.IntType()

    def _infer_match(self, expr: ast.Match, scope: Scope, *, in_formula: bool) -> ast.TypeExpr:
        scrutinee = self.infer(expr.scrutinee, scope, in_formula=in_formula)
        result: ast.TypeExpr = self.unifier.fresh()
        covered: set[str] = set()
        for branch in expr.branches:
            inner = dict(scope)
            match branch.pattern:
                case ast.PNil():
                    covered.add("nil")
                    element = self.unifier.fresh()
                    self.unify_at(ast.ListType(element), scrutinee, "pattern []", expr.span)
                case ast.PCons(head, tail):
                    covered.add("cons")
                    element = self.unifier.fresh()
                    self.unify_at(ast.ListType(element), scrutinee, "pattern ::", expr.span)
                    if head != "_":
                        inner[head] = element
                    if tail != "_":
                        inner[tail] = ast.ListType(element)
                case ast.PVar(name):
                    covered.add("any")
                    inner[name] = scrutinee
                case ast.PWild():
                    covered.add("any")
            body = self.infer(branch.body, inner, in_formula=in_formula)
            self.unify_at(result, body, "match branch", expr.span)
        if "any" not in covered and not {"nil", "cons"} <= covered:
            self.warnings.append(
                Error(
                    code=ErrorCode.NON_EXHAUSTIVE,
                    description="Match is not exhaustive",
                    span=expr.span,
                ),
            )
        return result

    # Formulas

    def check_formula(self, formula: ast.Formula, scope: Scope) -> None:
        match formula:
            case ast.All(names, type_, body) | ast.Ex(names, type_, body):
                bound = self.norm(type_)
                self.check_formula(body, {**scope, **dict.fromkeys(names, bound)})
            case (
                ast.And(left, right)
                | ast.Or(left, right)
                | ast.Implies(left, right)
                | ast.Iff(left, right)
            ):
                self.check_formula(left, scope)
                self.check_formula(right, scope)
            case ast.Not(operand):
                self.check_formula(operand, scope)
            case ast.Atom(expr, span):
                found = self.infer(expr, scope, in_formula=True)
                self.unify_at(ast.BoolType(), found, "formula atom", span)
            case ast.Eq(left, right, span):
                left_type = self.infer(left, scope, in_formula=True)
                right_type = self.infer(right, scope, in_formula=True)
                self.unify_at(left_type, right_type, "equality", span)


@dataclass(frozen=True, slots=True)
class TypedSpecies:
    flat: FlatSpecies
    warnings: tuple[Error, ...]


def _initial_type(entry: MethodEntry, typer: Typer) -> ast.TypeExpr:
    definition = entry.definition
    if entry.type is not None:
        return typer.norm(entry.type)
    fresh = typer.unifier.fresh
    if definition is None or not definition.params:
        result: ast.TypeExpr = ast.BoolType() if entry.kind is MethodKind.LOGICAL else fresh()
        return result
    result = ast.BoolType() if entry.kind is MethodKind.LOGICAL else fresh()
    return ast.Arrow(tuple(fresh() for _ in definition.params), result)


def _check_definition(entry: MethodEntry, typer: Typer) -> None:
    definition = entry.definition
    if definition is None:
        return
    declared = typer.method_types[entry.name]
    arg_types, result_type = signature_parts(typer.resolve(declared))
    if len(arg_types) != len(definition.params):
        msg = f"{len(definition.params)} parameters against declared {format_type(declared)}"
        raise TypeClashError(entry.name, msg, definition.span)
    scope: Scope = {}
    for param, arg_type in zip(definition.params, arg_types, strict=True):
        if param.type is not None:
            context = f"parameter {param.name}"
            typer.unify_at(arg_type, typer.norm(param.type), context, definition.span)
        scope[param.name] = arg_type
    if isinstance(definition, ast.LogicalLet):
        typer.check_formula(definition.body, scope)
        return
    if definition.result_type is not None:
        typer.unify_at(result_type, typer.norm(definition.result_type), "result", definition.span)
    body = typer.infer(definition.body, scope)
    typer.unify_at(result_type, body, f"body of {entry.name}", definition.span)
    check_termination(definition)


def typecheck_species(flat: FlatSpecies, env: SpeciesEnv) -> TypedSpecies:
    """Infer and check the types of every definition and statement of a species."""
    typer = Typer(flat, env)
    for entry in flat.entries:
        if entry.is_function:
            typer.method_types[entry.name] = _initial_type(entry, typer)
    for entry in flat.entries:
        try:
            if entry.is_function:
                _check_definition(entry, typer)
            elif entry.formula is not None:
                typer.check_formula(entry.formula, {})
        except FocaliteError as error:
            raise error.located(entry.span) from None
    entries: list[MethodEntry] = []
    for entry in flat.entries:
        if not entry.is_function:
            entries.append(entry)
            continue
        resolved = typer.resolve(typer.method_types[entry.name])
        if not typer.unifier.is_ground(resolved):
            msg = f"Cannot infer the type of {entry.name}: {format_type(resolved)}"
            raise TypeCheckError(msg, entry.span)
        type_ = entry.type if entry.type is not None else resolved
        entries.append(dataclasses.replace(entry, type=type_))
    LOGGER.debug("Typechecked %s", flat.name)
    return TypedSpecies(flat.with_entries(tuple(entries)), tuple(typer.warnings))
