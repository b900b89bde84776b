"""A CEK-style machine for method bodies.

The continuation is an explicit stack of frames, so deep recursion in the
object language consumes fuel rather than the host stack.
"""

import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass

from focalite.evaluator.budget import EvalBudget
from focalite.evaluator.values import (
    FALSE,
    TRUE,
    BoolValue,
    Closure,
    IntValue,
    ListValue,
    OpaqueValue,
    Value,
    format_value,
)
from focalite.exceptions import (
    EvalTargetError,
    FuelExhaustedError,
    MatchFailureError,
    RuntimeTypeError,
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
from focalite.species.model import CollectionValue, MethodKind
from focalite.species.types import signature_parts
from focalite.syntax import ast

LOGGER = logging.getLogger(__name__)

type Env = Mapping[str, Value]


@dataclass(frozen=True, slots=True)
class _Ctx:
    """The collection whose names are in scope, and whether its carrier is visible."""

    collection: str
    inside: bool


@dataclass(frozen=True, slots=True)
class _Target:
    collection: str
    method: str


# Control


@dataclass(frozen=True, slots=True)
class _Eval:
    expr: ast.Expr
    env: Env
    ctx: _Ctx


@dataclass(frozen=True, slots=True)
class _Return:
    value: Value


type _Control = _Eval | _Return


# Continuation frames


@dataclass(frozen=True, slots=True)
class _ArgsK:
    target: _Target
    done: tuple[Value, ...]
    todo: tuple[ast.Expr, ...]
    env: Env
    ctx: _Ctx


@dataclass(frozen=True, slots=True)
class _IfK:
    then: ast.Expr
    otherwise: ast.Expr
    env: Env
    ctx: _Ctx


@dataclass(frozen=True, slots=True)
class _MatchK:
    branches: tuple[ast.MatchBranch, ...]
    env: Env
    ctx: _Ctx


@dataclass(frozen=True, slots=True)
class _LetK:
    name: str
    body: ast.Expr
    env: Env
    ctx: _Ctx


@dataclass(frozen=True, slots=True)
class _AndK:
    right: ast.Expr
    env: Env
    ctx: _Ctx


@dataclass(frozen=True, slots=True)
class _OrK:
    right: ast.Expr
    env: Env
    ctx: _Ctx


@dataclass(frozen=True, slots=True)
class _NotK:
    pass


@dataclass(frozen=True, slots=True)
class _ConsK:
    tail: ast.Expr
    env: Env
    ctx: _Ctx


@dataclass(frozen=True, slots=True)
class _ConsTailK:
    head: Value


@dataclass(frozen=True, slots=True)
class _BinK:
    op: ast.BinaryOp
    right: ast.Expr
    env: Env
    ctx: _Ctx


@dataclass(frozen=True, slots=True)
class _BinRightK:
    op: ast.BinaryOp
    left: Value


@dataclass(frozen=True, slots=True)
class _ReturnK:
    """Leaving a collection: the result is exported at its declared type."""

    collection: str
    result: ast.TypeExpr


type _Frame = (
    _ArgsK
    | _IfK
    | _MatchK
    | _LetK
    | _AndK
    | _OrK
    | _NotK
    | _ConsK
    | _ConsTailK
    | _BinK
    | _BinRightK
    | _ReturnK
)


def _expect_bool(value: Value, context: str) -> bool:
    if not isinstance(value, BoolValue):
        msg = f"{context} expects a boolean, got {format_value(value)}"
        raise RuntimeTypeError(msg)
    return value.value


def _expect_int(value: Value, context: str) -> int:
    if not isinstance(value, IntValue):
        msg = f"{context} expects an integer, got {format_value(value)}"
        raise RuntimeTypeError(msg)
    return value.value


def _match(pattern: ast.Pattern, value: Value) -> dict[str, Value] | None:
    match pattern, value:
        case ast.PWild(), _:
            return {}
        case ast.PVar(name), _:
            return {name: value}
        case ast.PNil(), ListValue(cell):
            return {} if cell is None else None
        case ast.PCons(head, tail), ListValue(cell=(first, rest)):
            bound = {head: first, tail: rest}
            return {name: v for name, v in bound.items() if name != "_"}
        case (ast.PNil() | ast.PCons()), _ if not isinstance(value, ListValue):
            msg = f"list pattern applied to {format_value(value)}"
            raise RuntimeTypeError(msg)
    return None


class Interpreter:
    """Evaluates methods of the given collections under a fuel budget."""

    def __init__(
        self,
        collections: Mapping[str, CollectionValue],
        budget: EvalBudget | None = None,
    ) -> None:
        self.collections = collections
        self.budget = budget or EvalBudget()
        self.fuel = self.budget.fuel
        self._converted: dict[tuple[object, ...], tuple[ListValue, ListValue]] = {}

    # Public entry points

    def evaluate(self, collection: str, method: str, args: tuple[Value, ...]) -> Value:
        """Call ``collection!method`` from outside the collection."""
        self.fuel = self.budget.fuel
        self._converted.clear()
        ctx = _Ctx(collection, inside=False)
        return self._run(self._call(_Target(collection, method), args, ctx, []), [])

    def eval_expr(self, collection: str, expr: ast.Expr, env: Env | None = None) -> Value:
        """Evaluate a ground expression as a user of ``collection``."""
        self.fuel = self.budget.fuel
        self._converted.clear()
        return self._run(_Eval(expr, dict(env or {}), _Ctx(collection, inside=False)), [])

    def evaluate_formula(
        self,
        collection: str,
        formula: Formula,
        assignment: Mapping[str, Value] | None = None,
    ) -> bool:
        """Truth of a ground kernel formula inside ``collection``.

        Constants are looked up in ``assignment``; quantifiers are rejected.
        """
        self.fuel = self.budget.fuel
        self._converted.clear()
        return self._formula(formula, _Ctx(collection, inside=True), assignment or {})

    # Machine

    def _run(self, control: _Control, stack: list[_Frame]) -> Value:
        while True:
            if isinstance(control, _Eval):
                control = self._step(control, stack)
                continue
            if not stack:
                return control.value
            control = self._resume(stack.pop(), control.value, stack)

    def _step(self, control: _Eval, stack: list[_Frame]) -> _Control:  # noqa: C901, PLR0911, PLR0912
        expr, env, ctx = control.expr, control.env, control.ctx
        match expr:
            case ast.Var(name):
                if name in env:
                    return _Return(env[name])
                return self._method_value(_Target(ctx.collection, name), ctx, stack)
            case ast.IntLit(value):
                return _Return(IntValue(value))
            case ast.BoolLit(value):
                return _Return(BoolValue(value))
            case ast.ListNil():
                return _Return(ListValue())
            case ast.App(callee, args):
                if callee in env:
                    closure = env[callee]
                    if not isinstance(closure, Closure):
                        msg = f"{callee} is not a function: {format_value(closure)}"
                        raise RuntimeTypeError(msg)
                    target = _Target(closure.collection, closure.method)
                else:
                    target = _Target(ctx.collection, callee)
                return self._start_call(target, args, env, ctx, stack)
            case ast.QualifiedCall(owner, method, args):
                return self._start_call(_Target(owner, method), args, env, ctx, stack)
            case ast.ListCons(head, tail):
                stack.append(_ConsK(tail, env, ctx))
                return _Eval(head, env, ctx)
            case ast.If(cond, then, otherwise):
                stack.append(_IfK(then, otherwise, env, ctx))
                return _Eval(cond, env, ctx)
            case ast.Match(scrutinee, branches):
                stack.append(_MatchK(branches, env, ctx))
                return _Eval(scrutinee, env, ctx)
            case ast.LocalLet(name, bound, body):
                stack.append(_LetK(name, body, env, ctx))
                return _Eval(bound, env, ctx)
            case ast.BoolAnd(left, right):
                stack.append(_AndK(right, env, ctx))
                return _Eval(left, env, ctx)
            case ast.BoolOr(left, right):
                stack.append(_OrK(right, env, ctx))
                return _Eval(left, env, ctx)
            case ast.BoolNot(operand):
                stack.append(_NotK())
                return _Eval(operand, env, ctx)
            case ast.BinOp(op, left, right):
                stack.append(_BinK(op, right, env, ctx))
                return _Eval(left, env, ctx)

    def _resume(self, frame: _Frame, value: Value, stack: list[_Frame]) -> _Control:  # noqa: C901, PLR0911
        match frame:
            case _ArgsK(target, done, todo, env, ctx):
                if todo:
                    stack.append(_ArgsK(target, (*done, value), todo[1:], env, ctx))
                    return _Eval(todo[0], env, ctx)
                return self._call(target, (*done, value), ctx, stack)
            case _IfK(then, otherwise, env, ctx):
                branch = then if _expect_bool(value, "if") else otherwise
                return _Eval(branch, env, ctx)
            case _MatchK(branches, env, ctx):
                for branch in branches:
                    bound = _match(branch.pattern, value)
                    if bound is not None:
                        return _Eval(branch.body, {**env, **bound}, ctx)
                raise MatchFailureError(format_value(value))
            case _LetK(name, body, env, ctx):
                return _Eval(body, {**env, name: value}, ctx)
            case _AndK(right, env, ctx):
                return _Eval(right, env, ctx) if _expect_bool(value, "&&") else _Return(FALSE)
            case _OrK(right, env, ctx):
                return _Return(TRUE) if _expect_bool(value, "||") else _Eval(right, env, ctx)
            case _NotK():
                return _Return(BoolValue(not _expect_bool(value, "not")))
            case _ConsK(tail, env, ctx):
                stack.append(_ConsTailK(value))
                return _Eval(tail, env, ctx)
            case _ConsTailK(head):
                if not isinstance(value, ListValue):
                    msg = f"list tail expected, got {format_value(value)}"
                    raise RuntimeTypeError(msg)
                return _Return(value.cons(head))
            case _BinK(op, right, env, ctx):
                stack.append(_BinRightK(op, value))
                return _Eval(right, env, ctx)
            case _BinRightK(op, left):
                return _Return(_binary(op, left, value))
            case _ReturnK(collection, result):
                return _Return(self._export(value, result, collection))

    # Calls

    def _start_call(
        self,
        target: _Target,
        args: tuple[ast.Expr, ...],
        env: Env,
        ctx: _Ctx,
        stack: list[_Frame],
    ) -> _Control:
        if not args:
            return self._call(target, (), ctx, stack)
        stack.append(_ArgsK(target, (), args[1:], env, ctx))
        return _Eval(args[0], env, ctx)

    def _collection(self, name: str) -> CollectionValue:
        collection = self.collections.get(name)
        if collection is None:
            msg = f"Unknown collection {name}"
            raise EvalTargetError(msg)
        return collection

    def _method_value(self, target: _Target, ctx: _Ctx, stack: list[_Frame]) -> _Control:
        entry = self._collection(target.collection).entry(target.method)
        if entry is not None and entry.definition is not None and entry.definition.params:
            return _Return(Closure(target.collection, target.method))
        return self._call(target, (), ctx, stack)

    def _call(
        self,
        target: _Target,
        args: tuple[Value, ...],
        ctx: _Ctx,
        stack: list[_Frame],
    ) -> _Control:
        self.fuel -= 1
        if self.fuel < 0:
            raise FuelExhaustedError(self.budget.fuel)
        name = f"{target.collection}!{target.method}"
        entry = self._collection(target.collection).entry(target.method)
        if entry is None or entry.kind is MethodKind.STATEMENT:
            msg = f"{name} is not a method"
            raise EvalTargetError(msg)
        definition = entry.definition
        if entry.kind is MethodKind.LOGICAL or isinstance(definition, ast.LogicalLet):
            msg = f"{name} is a logical definition and cannot be executed"
            raise EvalTargetError(msg)
        if definition is None or entry.type is None:
            msg = f"{name} has no definition"
            raise EvalTargetError(msg)
        if len(args) != len(definition.params):
            msg = f"{name} expects {len(definition.params)} arguments, got {len(args)}"
            raise RuntimeTypeError(msg)
        arg_types, result_type = signature_parts(entry.type)
        if not arg_types and definition.params:
            arg_types = tuple(ast.TypeVar(0) for _ in definition.params)
        if not (ctx.inside and ctx.collection == target.collection):
            args = tuple(
                self._inject(arg, type_, target.collection)
                for arg, type_ in zip(args, arg_types, strict=True)
            )
            stack.append(_ReturnK(target.collection, result_type))
        env = {param.name: arg for param, arg in zip(definition.params, args, strict=True)}
        return _Eval(definition.body, env, _Ctx(target.collection, inside=True))

    # Collection boundaries

    def _carrier(self, collection: str) -> ast.TypeExpr:
        carrier = self._collection(collection).implementation().carrier
        if carrier is None:
            msg = f"Collection {collection} has no representation"
            raise RuntimeTypeError(msg)
        return carrier

    def _is_self(self, type_: ast.TypeExpr, collection: str) -> bool:
        return isinstance(type_, ast.SelfType) or type_ == self._carrier(collection)

    def _inject(self, value: Value, type_: ast.TypeExpr, collection: str) -> Value:
        """Bring an argument into ``collection``, unwrapping its own abstract values."""
        if not self._is_self(type_, collection):
            return self._shape(value, type_, collection)
        if isinstance(value, OpaqueValue):
            if value.collection != collection:
                shown = format_value(value, abstract=True)
                msg = f"{shown} passed where {collection} was expected"
                raise RuntimeTypeError(msg)
            return value.value
        return self._shape(value, self._carrier(collection), collection)

    def _shape(self, value: Value, type_: ast.TypeExpr, collection: str) -> Value:  # noqa: PLR0911
        """Check a value against a structural type; parameter carriers stay abstract."""
        match type_:
            case ast.ParamRef(owner):
                if isinstance(value, OpaqueValue):
                    if value.collection != owner:
                        shown = format_value(value, abstract=True)
                        msg = f"{shown} passed where {owner} was expected"
                        raise RuntimeTypeError(msg)
                    return value
                return OpaqueValue(owner, self._shape(value, self._carrier(owner), owner))
            case ast.BoolType():
                _expect_bool(value, collection)
                return value
            case ast.IntType():
                _expect_int(value, collection)
                return value
            case ast.ListType(element):
                if not isinstance(value, ListValue):
                    msg = f"{collection} expects a list, got {format_value(value)}"
                    raise RuntimeTypeError(msg)
                return self._map_list(
                    value,
                    "in",
                    (element, collection),
                    lambda v: self._inject(v, element, collection),
                )
            case _:
                return value

    def _map_list(
        self,
        value: ListValue,
        direction: str,
        key: tuple[ast.TypeExpr, str],
        convert: Callable[[Value], Value],
    ) -> ListValue:
        """Convert every element, reusing suffixes that were converted before.

        Unchanged suffixes are shared, so walking a list by recursion costs
        one conversion per cell instead of one per call.
        """
        pending: list[tuple[Value, ListValue, ListValue]] = []
        node = value
        while node.cell is not None and (id(node), direction, *key) not in self._converted:
            head, rest = node.cell
            pending.append((head, rest, node))
            node = rest
        done = node if node.cell is None else self._converted[(id(node), direction, *key)][1]
        for head, rest, original in reversed(pending):
            converted = convert(head)
            if converted is not head or done is not rest:
                done = done.cons(converted)
            else:
                done = original
            self._converted[(id(original), direction, *key)] = (original, done)
        return done

    def _export(self, value: Value, type_: ast.TypeExpr, collection: str) -> Value:
        """Hide the carrier of ``collection`` in a result that leaves it."""
        if self._is_self(type_, collection):
            return OpaqueValue(collection, value)
        match type_, value:
            case ast.ParamRef(), OpaqueValue():
                return value
            case ast.ParamRef(owner), _:
                return OpaqueValue(owner, value)
            case ast.ListType(element), ListValue():
                return self._map_list(
                    value,
                    "out",
                    (element, collection),
                    lambda v: self._export(v, element, collection),
                )
            case _:
                return value

    # Kernel formulas

    def _term(self, term: Term, ctx: _Ctx, assignment: Mapping[str, Value]) -> Value:
        match term:
            case Const(name):
                if name not in assignment:
                    msg = f"No value for {name}"
                    raise EvalTargetError(msg)
                return assignment[name]
            case Var(name):
                msg = f"Unbound variable {name}"
                raise EvalTargetError(msg)
            case Fn(symbol, args):
                values = tuple(self._term(arg, ctx, assignment) for arg in args)
                return self._apply_symbol(symbol, values, ctx)

    def _apply_symbol(self, symbol: str, values: tuple[Value, ...], ctx: _Ctx) -> Value:  # noqa: PLR0911
        if symbol == NIL_SYMBOL:
            return ListValue()
        if symbol == CONS_SYMBOL:
            head, tail = values
            if not isinstance(tail, ListValue):
                msg = f"list tail expected, got {format_value(tail)}"
                raise RuntimeTypeError(msg)
            return tail.cons(head)
        if symbol in ("true", "false") and not values:
            return BoolValue(symbol == "true")
        if symbol.lstrip("-").isdigit() and not values:
            return IntValue(int(symbol))
        if symbol in (ast.BinaryOp.ADD.value, ast.BinaryOp.SUB.value):
            return _binary(ast.BinaryOp(symbol), *values)
        if "!" in symbol:
            owner, method = symbol.split("!", 1)
            target = _Target(owner, method)
        else:
            target = _Target(ctx.collection, symbol)
        stack: list[_Frame] = []
        return self._run(self._call(target, values, ctx, stack), stack)

    def _formula(  # noqa: PLR0911
        self,
        formula: Formula,
        ctx: _Ctx,
        assignment: Mapping[str, Value],
    ) -> bool:
        match formula:
            case Truth(value):
                return value
            case Pred(symbol, args):
                values = tuple(self._term(arg, ctx, assignment) for arg in args)
                return _expect_bool(self._apply_symbol(symbol, values, ctx), symbol)
            case Equals(left, right):
                return self._term(left, ctx, assignment) == self._term(right, ctx, assignment)
            case Not(operand):
                return not self._formula(operand, ctx, assignment)
            case And(left, right):
                return self._formula(left, ctx, assignment) and self._formula(
                    right, ctx, assignment,
                )
            case Or(left, right):
                return self._formula(left, ctx, assignment) or self._formula(
                    right, ctx, assignment,
                )
            case Implies(left, right):
                return not self._formula(left, ctx, assignment) or self._formula(
                    right, ctx, assignment,
                )
            case Iff(left, right):
                return self._formula(left, ctx, assignment) == self._formula(
                    right, ctx, assignment,
                )
            case Forall() | Exists():
                msg = "Quantified formulas cannot be evaluated"
                raise EvalTargetError(msg)


def _binary(op: ast.BinaryOp, left: Value, right: Value) -> Value:
    match op:
        case ast.BinaryOp.EQ:
            return BoolValue(left == right)
        case ast.BinaryOp.ADD:
            return IntValue(_expect_int(left, "+") + _expect_int(right, "+"))
        case ast.BinaryOp.SUB:
            return IntValue(_expect_int(left, "-") - _expect_int(right, "-"))


def evaluate(
    collections: Mapping[str, CollectionValue],
    collection: str,
    method: str,
    args: tuple[Value, ...],
    budget: EvalBudget | None = None,
) -> Value:
    return Interpreter(collections, budget).evaluate(collection, method, args)

