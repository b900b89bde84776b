"""Truth-table oracle for quantifier-free formulas."""

import itertools
from collections.abc import Mapping

from focalite.exceptions import TooManyAtomsError, UnsupportedError
from focalite.logic.formulas import (
    And,
    Equals,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Pred,
    Truth,
    alpha_key,
)

MAX_ATOMS = 20


def _atoms(formula: Formula, found: dict[object, None]) -> None:
    match formula:
        case Pred() | Equals():
            found.setdefault(alpha_key(formula))
        case Truth():
            pass
        case Not(operand):
            _atoms(operand, found)
        case And(left, right) | Or(left, right) | Implies(left, right) | Iff(left, right):
            _atoms(left, found)
            _atoms(right, found)
        case Forall() | Exists():
            raise UnsupportedError("quantifier in a propositional formula")


def _evaluate(formula: Formula, assignment: Mapping[object, bool]) -> bool:  # noqa: PLR0911
    match formula:
        case Pred() | Equals():
            return assignment[alpha_key(formula)]
        case Truth(value):
            return value
        case Not(operand):
            return not _evaluate(operand, assignment)
        case And(left, right):
            return _evaluate(left, assignment) and _evaluate(right, assignment)
        case Or(left, right):
            return _evaluate(left, assignment) or _evaluate(right, assignment)
        case Implies(left, right):
            return not _evaluate(left, assignment) or _evaluate(right, assignment)
        case Iff(left, right):
            return _evaluate(left, assignment) == _evaluate(right, assignment)
        case Forall() | Exists():
            raise UnsupportedError("quantifier in a propositional formula")


def propositional_taut(formula: Formula) -> bool:
    """Whether ``formula`` holds under every assignment to its atoms.

    Atoms are compared up to alpha-equivalence; equalities are opaque atoms.
    """
    found: dict[object, None] = {}
    _atoms(formula, found)
    atoms = tuple(found)
    if len(atoms) > MAX_ATOMS:
        raise TooManyAtomsError(len(atoms), MAX_ATOMS)
    for values in itertools.product((False, True), repeat=len(atoms)):
        if not _evaluate(formula, dict(zip(atoms, values, strict=True))):
            return False
    return True
