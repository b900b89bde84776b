from collections.abc import Mapping

from focalite.logic.formulas import (
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
    formula_terms,
    forall,
    term_vars,
)


def subst_term(term: Term, mapping: Mapping[Var, Term]) -> Term:
    match term:
        case Var():
            return mapping.get(term, term)
        case Const():
            return term
        case Fn(symbol, args, sort):
            return Fn(symbol, tuple(subst_term(arg, mapping) for arg in args), sort)


def _used_names(formula: Formula, mapping: Mapping[Var, Term]) -> set[str]:
    names = {term.name for term in formula_terms(formula) if isinstance(term, Var | Const)}
    for value in mapping.values():
        names.update(var.name for var in term_vars(value))
    return names


def fresh_name(base: str, used: set[str]) -> str:
    if base not in used:
        return base
    index = 1
    while f"{base}_{index}" in used:
        index += 1
    return f"{base}_{index}"


def substitute(formula: Formula, mapping: Mapping[Var, Term]) -> Formula:
    """Capture-avoiding substitution of terms for free variables."""
    if not mapping:
        return formula
    match formula:
        case Truth():
            return formula
        case Pred(symbol, args):
            return Pred(symbol, tuple(subst_term(arg, mapping) for arg in args))
        case Equals(left, right):
            return Equals(subst_term(left, mapping), subst_term(right, mapping))
        case Not(operand):
            return Not(substitute(operand, mapping))
        case And(left, right):
            return And(substitute(left, mapping), substitute(right, mapping))
        case Or(left, right):
            return Or(substitute(left, mapping), substitute(right, mapping))
        case Implies(left, right):
            return Implies(substitute(left, mapping), substitute(right, mapping))
        case Iff(left, right):
            return Iff(substitute(left, mapping), substitute(right, mapping))
        case Forall(vars_, body) | Exists(vars_, body):
            return _substitute_binder(formula, vars_, body, mapping)


def _substitute_binder(
    formula: Forall | Exists,
    vars_: tuple[Var, ...],
    body: Formula,
    mapping: Mapping[Var, Term],
) -> Formula:
    inner = {var: term for var, term in mapping.items() if var not in vars_}
    if not inner:
        return formula
    captured = {var.name for term in inner.values() for var in term_vars(term)}
    renamed: list[Var] = []
    renaming: dict[Var, Term] = {}
    used = _used_names(body, inner) | {var.name for var in vars_}
    for var in vars_:
        if var.name in captured:
            fresh = Var(fresh_name(var.name, used), var.sort)
            used.add(fresh.name)
            renaming[var] = fresh
            renamed.append(fresh)
        else:
            renamed.append(var)
    if renaming:
        body = substitute(body, renaming)
    new_body = substitute(body, inner)
    if isinstance(formula, Forall):
        return Forall(tuple(renamed), new_body)
    return Exists(tuple(renamed), new_body)


def instantiate(formula: Forall | Exists, terms: tuple[Term, ...]) -> Formula:
    """Body of a quantified formula with its variables replaced by ``terms``."""
    return substitute(formula.body, dict(zip(formula.vars, terms, strict=True)))


def _replace_const_term(term: Term, mapping: Mapping[Const, Term]) -> Term:
    match term:
        case Var():
            return term
        case Const():
            return mapping.get(term, term)
        case Fn(symbol, args, sort):
            return Fn(symbol, tuple(_replace_const_term(arg, mapping) for arg in args), sort)


def replace_consts(formula: Formula, mapping: Mapping[Const, Term]) -> Formula:
    match formula:
        case Truth():
            return formula
        case Pred(symbol, args):
            return Pred(symbol, tuple(_replace_const_term(arg, mapping) for arg in args))
        case Equals(left, right):
            return Equals(_replace_const_term(left, mapping), _replace_const_term(right, mapping))
        case Not(operand):
            return Not(replace_consts(operand, mapping))
        case And(left, right):
            return And(replace_consts(left, mapping), replace_consts(right, mapping))
        case Or(left, right):
            return Or(replace_consts(left, mapping), replace_consts(right, mapping))
        case Implies(left, right):
            return Implies(replace_consts(left, mapping), replace_consts(right, mapping))
        case Iff(left, right):
            return Iff(replace_consts(left, mapping), replace_consts(right, mapping))
        case Forall(vars_, body):
            return Forall(vars_, replace_consts(body, mapping))
        case Exists(vars_, body):
            return Exists(vars_, replace_consts(body, mapping))


def close_over(consts: tuple[Const, ...], formula: Formula) -> Formula:
    """Universally close ``formula`` over the given rigid names."""
    if not consts:
        return formula
    used = {term.name for term in formula_terms(formula) if isinstance(term, Var)}
    mapping: dict[Const, Term] = {}
    binders: list[Var] = []
    for const in consts:
        var = Var(fresh_name(const.name, used), const.sort)
        used.add(var.name)
        mapping[const] = var
        binders.append(var)
    return forall(tuple(binders), replace_consts(formula, mapping))
