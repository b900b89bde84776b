import itertools

from focalite.exceptions import TypeCheckError
from focalite.syntax import ast
from focalite.syntax.printer import format_type


def replace_self(type_: ast.TypeExpr, replacement: ast.TypeExpr) -> ast.TypeExpr:
    match type_:
        case ast.SelfType():
            return replacement
        case ast.ListType(element):
            return ast.ListType(replace_self(element, replacement))
        case ast.Arrow(args, result):
            return ast.Arrow(
                tuple(replace_self(arg, replacement) for arg in args),
                replace_self(result, replacement),
            )
        case _:
            return type_


def normalize(type_: ast.TypeExpr, carrier: ast.TypeExpr | None) -> ast.TypeExpr:
    """Resolve ``Self`` to the carrier when the species defines one."""
    if carrier is None:
        return type_
    return replace_self(type_, carrier)


def signature_parts(
    type_: ast.TypeExpr,
) -> tuple[tuple[ast.TypeExpr, ...], ast.TypeExpr]:
    if isinstance(type_, ast.Arrow):
        return type_.args, type_.result
    return (), type_


class Unifier:
    """First-order unification over surface types extended with type variables."""

    def __init__(self) -> None:
        self._counter = itertools.count()
        self.bindings: dict[int, ast.TypeExpr] = {}

    def fresh(self) -> ast.TypeVar:
        return ast.TypeVar(next(self._counter))

    def resolve(self, type_: ast.TypeExpr) -> ast.TypeExpr:
        match type_:
            case ast.TypeVar(ident) if ident in self.bindings:
                return self.resolve(self.bindings[ident])
            case ast.ListType(element):
                return ast.ListType(self.resolve(element))
            case ast.Arrow(args, result):
                return ast.Arrow(tuple(self.resolve(arg) for arg in args), self.resolve(result))
            case _:
                return type_

    def _occurs(self, ident: int, type_: ast.TypeExpr) -> bool:
        match self.resolve(type_):
            case ast.TypeVar(other):
                return other == ident
            case ast.ListType(element):
                return self._occurs(ident, element)
            case ast.Arrow(args, result):
                return any(self._occurs(ident, t) for t in (*args, result))
            case _:
                return False

    def unify(self, left: ast.TypeExpr, right: ast.TypeExpr, context: str) -> None:
        left = self.resolve(left)
        right = self.resolve(right)
        if left == right:
            return
        if isinstance(left, ast.TypeVar):
            self._bind(left, right, context)
            return
        if isinstance(right, ast.TypeVar):
            self._bind(right, left, context)
            return
        match left, right:
            case ast.ListType(a), ast.ListType(b):
                self.unify(a, b, context)
                return
            case ast.Arrow(args_a, res_a), ast.Arrow(args_b, res_b) if len(args_a) == len(args_b):
                for a, b in zip(args_a, args_b, strict=True):
                    self.unify(a, b, context)
                self.unify(res_a, res_b, context)
                return
        msg = f"{context}: expected {format_type(left)}, found {format_type(right)}"
        raise TypeCheckError(msg)

    def _bind(self, var: ast.TypeVar, type_: ast.TypeExpr, context: str) -> None:
        if self._occurs(var.ident, type_):
            msg = f"{context}: recursive type {format_type(type_)}"
            raise TypeCheckError(msg)
        self.bindings[var.ident] = type_

    def is_ground(self, type_: ast.TypeExpr) -> bool:
        match self.resolve(type_):
            case ast.TypeVar():
                return False
            case ast.ListType(element):
                return self.is_ground(element)
            case ast.Arrow(args, result):
                return all(self.is_ground(t) for t in (*args, result))
            case _:
                return True
