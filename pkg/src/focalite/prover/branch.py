"""State of one tableau branch: literals mod congruence, pending splits and universals."""

import time
from collections import deque
from dataclasses import dataclass

from focalite.logic.formulas import (
    And,
    Const,
    Equals,
    Exists,
    Forall,
    Fn,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Pred,
    Term,
    Truth,
    Var,
    alpha_key,
    format_kernel,
    formula_terms,
    is_ground,
)
from focalite.logic.substitution import fresh_name, instantiate
from focalite.prover.congruence import CongruenceClosure
from focalite.prover.sequent import BudgetLimit
from focalite.syntax.ast import TypeExpr

type Deps = frozenset[int]
type Value = tuple[bool | None, Deps]

NO_DEPS: Deps = frozenset()


class BranchClosedError(Exception):
    def __init__(self, deps: Deps) -> None:
        super().__init__("branch closed")
        self.deps = deps


class BudgetExhaustedError(Exception):
    def __init__(self, limit: BudgetLimit) -> None:
        super().__init__(f"{limit} budget exhausted")
        self.limit = limit


class Limits:
    """Node and wall-clock limits shared by every branch of one search."""

    def __init__(self, max_nodes: int, deadline: float) -> None:
        self.max_nodes = max_nodes
        self.deadline = deadline

    def check(self, size: int) -> None:
        if size > self.max_nodes:
            raise BudgetExhaustedError("nodes")
        if time.monotonic() > self.deadline:
            raise BudgetExhaustedError("timeout")


class Names:
    """Fresh constant names, unique across a whole search."""

    def __init__(self, used: set[str]) -> None:
        self.used = used

    def fresh(self, base: str, sort: TypeExpr) -> Const:
        name = fresh_name(base, self.used)
        self.used.add(name)
        return Const(name, sort)


@dataclass(frozen=True, slots=True)
class Signed:
    sign: bool
    formula: Formula

    def render(self) -> str:
        text = format_kernel(self.formula)
        return text if self.sign else f"not ({text})"


@dataclass(frozen=True, slots=True)
class Beta:
    alternatives: tuple[tuple[Signed, ...], ...]
    deps: Deps
    generation: int


@dataclass(frozen=True, slots=True)
class Universal:
    """``all vars, body`` asserted with ``sign``; a false ``ex`` is stored as a false body."""

    vars: tuple[Var, ...]
    body: Formula
    sign: bool
    deps: Deps

    def instance(self, terms: tuple[Term, ...]) -> Signed:
        return Signed(self.sign, instantiate(Forall(self.vars, self.body), terms))

    @property
    def key(self) -> tuple[object, ...]:
        return self.sign, alpha_key(Forall(self.vars, self.body))


type _LiteralKey = tuple[object, ...]


def _flatten_quantifier(formula: Forall | Exists) -> tuple[tuple[Var, ...], Formula]:
    vars_ = formula.vars
    body = formula.body
    while isinstance(body, type(formula)) and not set(body.vars) & set(vars_):
        vars_ = vars_ + body.vars
        body = body.body
    return vars_, body


def _kleene_not(value: Value) -> Value:
    truth, deps = value
    return (None if truth is None else not truth), deps


def _kleene_and(left: Value, right: Value) -> Value:
    if left[0] is False:
        return left
    if right[0] is False:
        return right
    if left[0] and right[0]:
        return True, left[1] | right[1]
    return None, NO_DEPS


def _kleene_or(left: Value, right: Value) -> Value:
    return _kleene_not(_kleene_and(_kleene_not(left), _kleene_not(right)))


class Branch:
    def __init__(self, limits: Limits, names: Names) -> None:
        self.limits = limits
        self.names = names
        self.cc = CongruenceClosure()
        self.literals: dict[_LiteralKey, tuple[bool, Deps, Pred]] = {}
        self.formulas: dict[object, tuple[bool, Deps]] = {}
        self.disequalities: list[tuple[Term, Term, Deps]] = []
        self.betas: list[Beta] = []
        self.universals: list[Universal] = []
        self.instances: set[tuple[object, ...]] = set()
        self.witnesses: dict[TypeExpr, Const] = {}
        self.eq_deps: Deps = NO_DEPS
        self.queue: deque[tuple[Signed, Deps, int]] = deque()
        self.size = 0

    def copy(self) -> "Branch":
        other = Branch(self.limits, self.names)
        other.cc = self.cc.copy()
        other.literals = dict(self.literals)
        other.formulas = dict(self.formulas)
        other.disequalities = list(self.disequalities)
        other.betas = list(self.betas)
        other.universals = list(self.universals)
        other.instances = set(self.instances)
        other.witnesses = dict(self.witnesses)
        other.eq_deps = self.eq_deps
        other.queue = deque(self.queue)
        other.size = self.size
        return other

    def push(self, signed: Signed, deps: Deps, generation: int) -> None:
        self.queue.append((signed, deps, generation))

    def witness(self, sort: TypeExpr) -> Const:
        """A constant standing for some element of ``sort`` when the branch names none."""
        if sort not in self.witnesses:
            const = self.names.fresh("w", sort)
            self.witnesses[sort] = const
            self.cc.add(const)
        return self.witnesses[sort]

    def open_literals(self) -> tuple[str, ...]:
        rendered = [Signed(sign, atom).render() for sign, _, atom in self.literals.values()]
        rendered.extend(format_kernel(Equals(a, b)) for a, b in self._equalities())
        rendered.extend(
            Signed(False, Equals(a, b)).render() for a, b, _ in self.disequalities
        )
        return tuple(rendered)

    def _equalities(self) -> list[tuple[Term, Term]]:
        pairs: list[tuple[Term, Term]] = []
        for representative, members in self.cc.classes().items():
            pairs.extend((representative, member) for member in members[1:])
        return pairs

    # Saturation

    def saturate(self) -> None:
        """Apply every non-branching rule; raises ``BranchClosedError`` on a contradiction."""
        while True:
            while self.queue:
                signed, deps, generation = self.queue.popleft()
                self._add(signed, deps, generation)
            if not self._propagate_betas():
                return

    def _add(self, signed: Signed, deps: Deps, generation: int) -> None:  # noqa: C901
        self.size += 1
        self.limits.check(self.size)
        sign, formula = signed.sign, signed.formula
        key = alpha_key(formula)
        known = self.formulas.get(key)
        if known is not None:
            if known[0] != sign:
                raise BranchClosedError(deps | known[1])
            return
        self.formulas[key] = (sign, deps)
        for term in formula_terms(formula):
            if is_ground(term):
                self.cc.add(term)
        match formula:
            case Truth(value):
                if value != sign:
                    raise BranchClosedError(deps)
            case Pred():
                self._add_predicate(formula, sign, deps)
            case Equals(left, right):
                self._add_equality(left, right, sign, deps)
            case Not(operand):
                self.push(Signed(not sign, operand), deps, generation)
            case And(left, right) | Or(left, right) | Implies(left, right):
                self._connective(formula, left, right, sign, deps, generation)
            case Iff(left, right):
                alternatives = (
                    (Signed(True, left), Signed(sign, right)),
                    (Signed(False, left), Signed(not sign, right)),
                )
                self.betas.append(Beta(alternatives, deps, generation))
            case Forall() | Exists():
                universal = isinstance(formula, Forall) == sign
                vars_, body = _flatten_quantifier(formula)
                if universal:
                    self.universals.append(Universal(vars_, body, sign, deps))
                else:
                    consts = tuple(self.names.fresh(var.name, var.sort) for var in vars_)
                    instance = instantiate(Forall(vars_, body), consts)
                    self.push(Signed(sign, instance), deps, generation)

    def _connective(  # noqa: PLR0913
        self,
        formula: And | Or | Implies,
        left: Formula,
        right: Formula,
        sign: bool,  # noqa: FBT001
        deps: Deps,
        generation: int,
    ) -> None:
        left_sign = sign if not isinstance(formula, Implies) else not sign
        conjunctive = isinstance(formula, And) == sign
        first, second = Signed(left_sign, left), Signed(sign, right)
        if conjunctive:
            self.push(first, deps, generation)
            self.push(second, deps, generation)
        else:
            self.betas.append(Beta(((first,), (second,)), deps, generation))

    def _literal_key(self, atom: Pred) -> _LiteralKey:
        return atom.symbol, tuple(self.cc.find(arg) for arg in atom.args)

    def _add_predicate(self, atom: Pred, sign: bool, deps: Deps) -> None:  # noqa: FBT001
        key = self._literal_key(atom)
        known = self.literals.get(key)
        if known is not None:
            if known[0] != sign:
                raise BranchClosedError(deps | known[1] | self.eq_deps)
            return
        self.literals[key] = (sign, deps, atom)

    def _add_equality(
        self,
        left: Term,
        right: Term,
        sign: bool,  # noqa: FBT001
        deps: Deps,
    ) -> None:
        if not sign:
            if self.cc.equal(left, right):
                raise BranchClosedError(deps | self.eq_deps)
            self.disequalities.append((left, right, deps))
            return
        if self.cc.equal(left, right):
            return
        self.cc.merge(left, right)
        self.eq_deps = self.eq_deps | deps
        if self.cc.inconsistent:
            raise BranchClosedError(self.eq_deps)
        for a, b, diseq_deps in self.disequalities:
            if self.cc.equal(a, b):
                raise BranchClosedError(diseq_deps | self.eq_deps)
        literals = self.literals
        self.literals = {}
        for sign_, deps_, atom in literals.values():
            self._add_predicate(atom, sign_, deps_)

    # Three-valued evaluation

    def value(self, formula: Formula) -> Value:  # noqa: PLR0911
        """Truth of ``formula`` as far as the branch determines it, with the choices used."""
        match formula:
            case Truth(value):
                return value, NO_DEPS
            case Pred():
                if not all(is_ground(arg) for arg in formula.args):
                    return None, NO_DEPS
                known = self.literals.get(self._literal_key(formula))
                if known is None:
                    return None, NO_DEPS
                return known[0], known[1] | self.eq_deps
            case Equals(left, right):
                return self._equality_value(left, right)
            case Not(operand):
                return _kleene_not(self.value(operand))
            case And(left, right):
                return _kleene_and(self.value(left), self.value(right))
            case Or(left, right):
                return _kleene_or(self.value(left), self.value(right))
            case Implies(left, right):
                return _kleene_or(_kleene_not(self.value(left)), self.value(right))
            case Iff(left, right):
                first, second = self.value(left), self.value(right)
                if first[0] is None or second[0] is None:
                    return None, NO_DEPS
                return first[0] == second[0], first[1] | second[1]
            case Forall() | Exists():
                known = self.formulas.get(alpha_key(formula))
                return (None, NO_DEPS) if known is None else known

    def _equality_value(self, left: Term, right: Term) -> Value:
        if not is_ground(left) or not is_ground(right):
            return None, NO_DEPS
        cc = self.cc
        if cc.equal(left, right):
            return True, self.eq_deps
        if cc.distinct(left, right):
            return False, self.eq_deps
        for a, b, deps in self.disequalities:
            if (cc.equal(a, left) and cc.equal(b, right)) or (
                cc.equal(a, right) and cc.equal(b, left)
            ):
                return False, deps | self.eq_deps
        return None, NO_DEPS

    def _propagate_betas(self) -> bool:
        """Drop refuted alternatives; returns whether new formulas were queued."""
        progressed = False
        remaining: list[Beta] = []
        for beta in self.betas:
            alive: list[tuple[Signed, ...]] = []
            refuted = beta.deps
            satisfied = False
            for alternative in beta.alternatives:
                values = [self.value(member.formula) for member in alternative]
                refuting = next(
                    (
                        deps
                        for (truth, deps), member in zip(values, alternative, strict=True)
                        if truth is not None and truth != member.sign
                    ),
                    None,
                )
                if refuting is not None:
                    refuted = refuted | refuting
                    continue
                if all(v[0] is not None for v in values):
                    satisfied = True
                    break
                alive.append(alternative)
            if satisfied:
                continue
            if not alive:
                raise BranchClosedError(refuted)
            if len(alive) == 1:
                for member in alive[0]:
                    self.push(member, refuted, beta.generation)
                progressed = True
                continue
            remaining.append(Beta(tuple(alive), refuted, beta.generation))
        self.betas = remaining
        return progressed

    # Term pool

    def pool(self, sort: TypeExpr) -> tuple[Term, ...]:
        return tuple(term for term in self.cc.representatives() if term.sort == sort)

    def ground_atoms(self) -> tuple[Pred, ...]:
        return tuple(atom for _, _, atom in self.literals.values())

    def terms_by_symbol(self) -> dict[str, list[Fn]]:
        index: dict[str, list[Fn]] = {}
        for term in self.cc.terms:
            if isinstance(term, Fn):
                index.setdefault(term.symbol, []).append(term)
        return index
