"""Canonical rendering of units; parsing the output yields an equal tree."""

from focalite.syntax import ast

_INDENT = "  "

_FORMULA_LEVEL = {
    ast.Iff: 0,
    ast.Implies: 1,
    ast.Or: 2,
    ast.And: 3,
    ast.Not: 4,
    ast.All: 4,
    ast.Ex: 4,
    ast.Atom: 5,
    ast.Eq: 5,
}

_EXPR_LEVEL = {
    ast.If: 0,
    ast.Match: 0,
    ast.LocalLet: 0,
    ast.BoolOr: 1,
    ast.BoolAnd: 2,
    ast.BoolNot: 3,
}
_BINOP_LEVEL = {ast.BinaryOp.EQ: 4, ast.BinaryOp.ADD: 6, ast.BinaryOp.SUB: 6}
_CONS_LEVEL = 5
_ATOM_LEVEL = 7


def format_type(type_: ast.TypeExpr) -> str:
    match type_:
        case ast.SelfType():
            return "Self"
        case ast.BoolType():
            return "bool"
        case ast.IntType():
            return "int"
        case ast.ListType(element):
            return f"list({format_type(element)})"
        case ast.ParamRef(name):
            return name
        case ast.TypeVar(ident):
            return f"'t{ident}"
        case ast.Arrow(args, result):
            parts = [_arrow_part(arg) for arg in args]
            parts.append(_arrow_part(result))
            return " -> ".join(parts)


def _arrow_part(type_: ast.TypeExpr) -> str:
    text = format_type(type_)
    return f"({text})" if isinstance(type_, ast.Arrow) else text


def _expr_level(expr: ast.Expr) -> int:
    if isinstance(expr, ast.BinOp):
        return _BINOP_LEVEL[expr.op]
    if isinstance(expr, ast.ListCons):
        return _CONS_LEVEL
    return _EXPR_LEVEL.get(type(expr), _ATOM_LEVEL)


def format_expr(
    expr: ast.Expr,
    ctx: int = 0,
    *,
    open_end: bool = False,
    lead: bool = False,
) -> str:
    """Render an expression.

    ``open_end`` marks positions followed by further match branches, where a bare
    ``match`` would swallow them. ``lead`` marks the first token of a formula atom,
    where a bare ``not`` would be read as logical negation.
    """
    level = _expr_level(expr)
    needs_parens = level < ctx or (isinstance(expr, ast.Match) and open_end)
    needs_parens = needs_parens or (isinstance(expr, ast.BoolNot) and lead)
    if needs_parens:
        return f"({_expr_body(expr, open_end=False, lead=False)})"
    return _expr_body(expr, open_end=open_end, lead=lead)


def _args(args: tuple[ast.Expr, ...]) -> str:
    return ", ".join(format_expr(arg) for arg in args)


def _expr_body(expr: ast.Expr, *, open_end: bool, lead: bool) -> str:  # noqa: C901, PLR0911
    match expr:
        case ast.Var(name):
            return name
        case ast.IntLit(value):
            return str(value)
        case ast.BoolLit(value):
            return "true" if value else "false"
        case ast.App(callee, args):
            return f"{callee}({_args(args)})"
        case ast.QualifiedCall(collection, method, args):
            suffix = f"({_args(args)})" if args else ""
            return f"{collection}!{method}{suffix}"
        case ast.ListNil():
            return "[]"
        case ast.ListCons(head, tail):
            left = format_expr(head, _CONS_LEVEL + 1, lead=lead)
            return f"{left} :: {format_expr(tail, _CONS_LEVEL)}"
        case ast.If(cond, then, otherwise):
            return (
                f"if {format_expr(cond)} then {format_expr(then)} "
                f"else {format_expr(otherwise, open_end=open_end)}"
            )
        case ast.Match(scrutinee, branches):
            rendered = []
            for index, branch in enumerate(branches):
                last = index == len(branches) - 1
                body = format_expr(branch.body, open_end=open_end or not last)
                rendered.append(f"| {_pattern(branch.pattern)} -> {body}")
            return f"match {format_expr(scrutinee)} with {' '.join(rendered)}"
        case ast.LocalLet(name, bound, body):
            return (
                f"let {name} = {format_expr(bound)} in "
                f"{format_expr(body, open_end=open_end)}"
            )
        case ast.BoolOr(left, right):
            return f"{format_expr(left, 1, lead=lead)} || {format_expr(right, 2)}"
        case ast.BoolAnd(left, right):
            return f"{format_expr(left, 2, lead=lead)} && {format_expr(right, 3)}"
        case ast.BoolNot(operand):
            return f"not {format_expr(operand, 3)}"
        case ast.BinOp(op, left, right):
            level = _BINOP_LEVEL[op]
            right_ctx = level + 1
            return (
                f"{format_expr(left, level + 1 if op is ast.BinaryOp.EQ else level, lead=lead)}"
                f" {op.value} {format_expr(right, right_ctx)}"
            )


def _pattern(pattern: ast.Pattern) -> str:
    match pattern:
        case ast.PNil():
            return "[]"
        case ast.PCons(head, tail):
            return f"{head} :: {tail}"
        case ast.PVar(name):
            return name
        case ast.PWild():
            return "_"


def _formula_level(formula: ast.Formula) -> int:
    return _FORMULA_LEVEL[type(formula)]


def format_formula(formula: ast.Formula, ctx: int = 0, *, tail: bool = True) -> str:
    """Render a formula; quantifiers extend to the right and are bare only in tail position."""
    quantified = isinstance(formula, ast.All | ast.Ex)
    if _formula_level(formula) < ctx or (quantified and not tail):
        return f"({_formula_body(formula, tail=True)})"
    return _formula_body(formula, tail=tail)


def _formula_body(formula: ast.Formula, *, tail: bool) -> str:
    match formula:
        case ast.All(names, type_, body) | ast.Ex(names, type_, body):
            keyword = "all" if isinstance(formula, ast.All) else "ex"
            return f"{keyword} {' '.join(names)} : {format_type(type_)}, {format_formula(body)}"
        case ast.Iff(left, right):
            return _binary(left, "<->", right, (0, 1), tail=tail)
        case ast.Implies(left, right):
            return _binary(left, "->", right, (2, 1), tail=tail)
        case ast.Or(left, right):
            return _binary(left, "\\/", right, (2, 3), tail=tail)
        case ast.And(left, right):
            return _binary(left, "/\\", right, (3, 4), tail=tail)
        case ast.Not(operand):
            return f"not {format_formula(operand, 4, tail=tail)}"
        case ast.Eq(left, right):
            return f"{format_expr(left, 5, lead=True)} = {format_expr(right, 5)}"
        case ast.Atom(expr):
            return format_expr(expr, lead=True)


def _binary(
    left: ast.Formula,
    symbol: str,
    right: ast.Formula,
    contexts: tuple[int, int],
    *,
    tail: bool,
) -> str:
    left_text = format_formula(left, contexts[0], tail=False)
    right_text = format_formula(right, contexts[1], tail=tail)
    return f"{left_text} {symbol} {right_text}"


def format_citation(citation: ast.Citation) -> str:
    return f"{citation.kind.value} {', '.join(citation.names)}"


def format_justification(justification: ast.Justification) -> str:
    if justification.conclude:
        return "conclude"
    return "by " + " ".join(format_citation(citation) for citation in justification.citations)


def _format_step(step: ast.Step, depth: int) -> list[str]:
    indent = _INDENT * depth
    inner = indent + _INDENT * 3
    if step.qed:
        return [f"{indent}{step.label} qed {format_justification(_as_justification(step))}"]
    parts = [
        f"assume {' '.join(group.names)} : {format_type(group.type)},"
        for group in step.assumptions
    ]
    parts.extend(
        f"hypothesis {hyp.name} : {format_formula(hyp.formula)}," for hyp in step.hypotheses
    )
    if step.goal is not None:
        parts.append(f"prove {format_formula(step.goal)}")
    lines: list[str] = []
    if isinstance(step.body, ast.Justification):
        parts.append(format_justification(step.body))
        lines.append(f"{indent}{step.label} {parts[0]}")
        lines.extend(f"{inner}{part}" for part in parts[1:])
        return lines
    lines.append(f"{indent}{step.label} {parts[0]}")
    lines.extend(f"{inner}{part}" for part in parts[1:])
    for child in step.body.steps:
        lines.extend(_format_step(child, depth + 1))
    return lines


def _as_justification(step: ast.Step) -> ast.Justification:
    if not isinstance(step.body, ast.Justification):
        msg = f"terminal step {step.label} has sub-steps"
        raise TypeError(msg)
    return step.body


def format_proof(proof: ast.Proof, depth: int = 2) -> str:
    if isinstance(proof, ast.Justification):
        return " " + format_justification(proof)
    lines: list[str] = []
    for step in proof.steps:
        lines.extend(_format_step(step, depth))
    return "\n" + "\n".join(lines)


def _params(params: tuple[ast.Param, ...]) -> str:
    if not params:
        return ""
    rendered = (
        f"{param.name} : {format_type(param.type)}" if param.type is not None else param.name
        for param in params
    )
    return f"({', '.join(rendered)})"


def format_method(method: ast.Method) -> str:
    match method:
        case ast.Signature(name, type_):
            return f"{_INDENT}signature {name} : {format_type(type_)};"
        case ast.Representation(type_):
            return f"{_INDENT}representation = {format_type(type_)};"
        case ast.LetDef():
            return _format_let(method)
        case ast.LogicalLet(name, params, body, is_final):
            final = "final " if is_final else ""
            head = f"{_INDENT}logical {final}let {name}{_params(params)} ="
            return f"{head}\n{_INDENT * 2}{format_formula(body)};"
        case ast.Property(name, formula):
            return f"{_INDENT}property {name} : {format_formula(formula)};"
        case ast.Theorem(name, formula, proof):
            return (
                f"{_INDENT}theorem {name} : {format_formula(formula)}\n"
                f"{_INDENT * 2}proof ={format_proof(proof)};"
            )
        case ast.ProofOf(name, proof):
            return f"{_INDENT}proof of {name} ={format_proof(proof)};"


def _format_let(method: ast.LetDef) -> str:
    head = "final let" if method.is_final else "let"
    if method.is_recursive:
        head += " rec"
    result = f" : {format_type(method.result_type)}" if method.result_type is not None else ""
    text = (
        f"{_INDENT}{head} {method.name}{_params(method.params)}{result} =\n"
        f"{_INDENT * 2}{format_expr(method.body)}"
    )
    if method.termination is not None:
        text += f"\n{_INDENT * 2}termination proof = structural {method.termination}"
    return text + ";"


def _species_expr(expr: ast.SpeciesExpr) -> str:
    return f"{expr.name}({', '.join(expr.args)})" if expr.args else expr.name


def format_phrase(phrase: ast.Phrase) -> str:
    if isinstance(phrase, ast.CollectionDecl):
        return f"collection {phrase.name} = implement {_species_expr(phrase.implements)}; end;;"
    params = ", ".join(
        f"{param.name} is {_species_expr(param.interface)}" for param in phrase.params
    )
    header = f"species {phrase.name}{f' ({params})' if params else ''} ="
    lines = [header]
    if phrase.inherits:
        lines.append(f"{_INDENT}inherit {', '.join(_species_expr(e) for e in phrase.inherits)};")
    lines.extend(format_method(method) for method in phrase.methods)
    lines.append("end;;")
    return "\n".join(lines)


def pretty_print(unit: ast.Unit) -> str:
    """Render a unit in canonical layout."""
    return "\n\n".join(format_phrase(phrase) for phrase in unit.phrases) + "\n"
