from focalite.exceptions import NonStructuralRecursionError, TypeCheckError
from focalite.syntax import ast


def check_termination(definition: ast.LetDef) -> None:
    """Accept a recursive definition only if every recursive call is structural.

    The argument in the decreasing position of each self-call must be a variable
    bound as a strict sub-list of that parameter by a ``match``.
    """
    if not definition.is_recursive or definition.termination is None:
        return
    names = [param.name for param in definition.params]
    if definition.termination not in names:
        msg = (
            f"Termination parameter {definition.termination} is not a parameter "
            f"of {definition.name}"
        )
        raise TypeCheckError(msg, definition.span)
    checker = _StructuralCheck(definition.name, names.index(definition.termination))
    checker.walk(definition.body, frozenset({definition.termination}), frozenset())


class _StructuralCheck:
    def __init__(self, name: str, position: int) -> None:
        self.name = name
        self.position = position

    def walk(  # noqa: C901
        self,
        expr: ast.Expr,
        whole: frozenset[str],
        smaller: frozenset[str],
    ) -> None:
        match expr:
            case ast.Var(name, span) if name == self.name:
                raise NonStructuralRecursionError(self.name, span)
            case ast.App(callee, args, span):
                if callee == self.name:
                    argument = args[self.position] if self.position < len(args) else None
                    if not (isinstance(argument, ast.Var) and argument.name in smaller):
                        raise NonStructuralRecursionError(self.name, span)
                for arg in args:
                    self.walk(arg, whole, smaller)
            case ast.QualifiedCall(_, _, args):
                for arg in args:
                    self.walk(arg, whole, smaller)
            case ast.ListCons(head, tail):
                self.walk(head, whole, smaller)
                self.walk(tail, whole, smaller)
            case ast.If(cond, then, otherwise):
                for part in (cond, then, otherwise):
                    self.walk(part, whole, smaller)
            case ast.Match(scrutinee, branches):
                self.walk(scrutinee, whole, smaller)
                for branch in branches:
                    self._branch(scrutinee, branch, whole, smaller)
            case ast.LocalLet(name, bound, body):
                self.walk(bound, whole, smaller)
                self.walk(body, whole - {name}, smaller - {name})
            case ast.BoolAnd(left, right) | ast.BoolOr(left, right) | ast.BinOp(_, left, right):
                self.walk(left, whole, smaller)
                self.walk(right, whole, smaller)
            case ast.BoolNot(operand):
                self.walk(operand, whole, smaller)
            case _:
                return

    def _branch(
        self,
        scrutinee: ast.Expr,
        branch: ast.MatchBranch,
        whole: frozenset[str],
        smaller: frozenset[str],
    ) -> None:
        source = scrutinee.name if isinstance(scrutinee, ast.Var) else None
        tracked = source is not None and (source in whole or source in smaller)
        match branch.pattern:
            case ast.PCons(head, tail):
                bound = {head, tail}
                whole, smaller = whole - bound, smaller - bound
                if tracked:
                    smaller = smaller | {tail}
            case ast.PVar(name):
                whole, smaller = whole - {name}, smaller - {name}
                if tracked and source in smaller:
                    smaller = smaller | {name}
                elif tracked:
                    whole = whole | {name}
            case _:
                pass
        self.walk(branch.body, whole, smaller)
