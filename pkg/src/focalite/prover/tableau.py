"""Proof search: splitting with backjumping, then rounds of universal instantiation."""

import itertools
import logging
import math
import time
from dataclasses import dataclass

from focalite.logic.formulas import (
    And,
    Equals,
    Fn,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Pred,
    Term,
    Var,
    constants,
    subterms,
    term_vars,
)
from focalite.prover.branch import (
    NO_DEPS,
    Branch,
    BranchClosedError,
    BudgetExhaustedError,
    Deps,
    Limits,
    Names,
    Signed,
    Universal,
)
from focalite.prover.budget import SearchBudget
from focalite.prover.sequent import BudgetExceeded, NotProved, ProverOutcome, Proved, Sequent

LOGGER = logging.getLogger(__name__)

POOL_PRODUCT_LIMIT = 64
MATCHES_PER_UNIVERSAL = 200
OPEN_BRANCH_SAMPLE = 20

type _Binding = dict[Var, Term]


@dataclass(frozen=True, slots=True)
class _Closed:
    deps: Deps


@dataclass(frozen=True, slots=True)
class _Open:
    branch: Branch
    out_of_rounds: bool


type _Result = _Closed | _Open


def _triggers(universal: Universal) -> tuple[Pred | Fn, ...]:
    """Atoms and compound terms of the body that mention the quantified variables."""
    bound = set(universal.vars)
    found: dict[Pred | Fn, None] = {}

    def mentions(term: Term) -> bool:
        return any(var in bound for var in term_vars(term))

    def inner_free(term: Term) -> bool:
        return all(var in bound for var in term_vars(term))

    def walk(formula: Formula) -> None:
        match formula:
            case Pred(_, args):
                if any(mentions(arg) for arg in args) and all(inner_free(a) for a in args):
                    found.setdefault(formula)
                for arg in args:
                    collect(arg)
            case Equals(left, right):
                collect(left)
                collect(right)
            case Not(operand):
                walk(operand)
            case And(left, right) | Or(left, right) | Implies(left, right) | Iff(left, right):
                walk(left)
                walk(right)
            case _:
                pass

    def collect(term: Term) -> None:
        for sub in subterms(term):
            if isinstance(sub, Fn) and sub.args and mentions(sub) and inner_free(sub):
                found.setdefault(sub)

    walk(universal.body)
    return tuple(found)


class _Search:
    def __init__(self, rounds: int, limits: Limits, names: Names) -> None:
        self.rounds = rounds
        self.limits = limits
        self.names = names
        self.choices = 0
        self.closed = 0
        self.members: dict[Term, tuple[Term, ...]] = {}

    def run(self, branch: Branch) -> _Result:
        return self._search(branch, self.rounds, 0)

    def _search(self, branch: Branch, rounds_left: int, generation: int) -> _Result:
        while True:
            try:
                branch.saturate()
            except BranchClosedError as closure:
                self.closed += 1
                return _Closed(closure.deps)
            if branch.betas:
                return self._split(branch, rounds_left, generation)
            if not branch.universals:
                return _Open(branch, out_of_rounds=False)
            if rounds_left == 0:
                return _Open(branch, out_of_rounds=True)
            generation += 1
            if not self._gamma(branch, generation):
                return _Open(branch, out_of_rounds=False)
            rounds_left -= 1

    def _split(self, branch: Branch, rounds_left: int, generation: int) -> _Result:
        beta = min(branch.betas, key=lambda b: (b.generation, len(b.alternatives)))
        branch.betas.remove(beta)
        self.choices += 1
        choice = self.choices
        collected: set[int] = set()
        for alternative in beta.alternatives:
            child = branch.copy()
            for member in alternative:
                child.push(member, beta.deps | {choice}, beta.generation)
            result = self._search(child, rounds_left, generation)
            if isinstance(result, _Open):
                return result
            if choice not in result.deps:
                return result
            collected |= result.deps - {choice}
        return _Closed(frozenset(collected))

    # Instantiation

    def _gamma(self, branch: Branch, generation: int) -> bool:
        """Add one round of instances of every universal; false when nothing new appears."""
        index = branch.terms_by_symbol()
        self.members = branch.cc.classes()
        atoms = branch.ground_atoms()
        added = False
        for universal in tuple(branch.universals):
            for terms in self._instances(branch, universal, index, atoms):
                marker = (universal.key, terms)
                if marker in branch.instances:
                    continue
                branch.instances.add(marker)
                branch.push(universal.instance(terms), universal.deps, generation)
                added = True
        return added

    def _instances(
        self,
        branch: Branch,
        universal: Universal,
        index: dict[str, list[Fn]],
        atoms: tuple[Pred, ...],
    ) -> list[tuple[Term, ...]]:
        bindings: list[_Binding] = []
        for trigger in _triggers(universal):
            if isinstance(trigger, Pred):
                candidates: list[Pred | Fn] = [a for a in atoms if a.symbol == trigger.symbol]
            else:
                candidates = list(index.get(trigger.symbol, ()))
            for candidate in candidates:
                bindings.extend(self._match_args(branch, universal, trigger.args, candidate.args))
                if len(bindings) >= MATCHES_PER_UNIVERSAL:
                    break
        pools = [branch.pool(var.sort) or (branch.witness(var.sort),) for var in universal.vars]
        results: dict[tuple[Term, ...], None] = {}
        for binding in bindings[:MATCHES_PER_UNIVERSAL]:
            free = [i for i, var in enumerate(universal.vars) if var not in binding]
            if math.prod(len(pools[i]) for i in free) > POOL_PRODUCT_LIMIT:
                continue
            for fill in itertools.product(*(pools[i] for i in free)):
                filled = dict(zip(free, fill, strict=True))
                terms = tuple(
                    filled[i] if i in filled else binding[var]
                    for i, var in enumerate(universal.vars)
                )
                results.setdefault(terms)
        if math.prod(len(pool) for pool in pools) <= POOL_PRODUCT_LIMIT:
            for terms in itertools.product(*pools):
                results.setdefault(tuple(terms))
        return list(results)

    def _match_args(
        self,
        branch: Branch,
        universal: Universal,
        patterns: tuple[Term, ...],
        terms: tuple[Term, ...],
    ) -> list[_Binding]:
        partial: list[_Binding] = [{}]
        for pattern, term in zip(patterns, terms, strict=True):
            partial = [
                extended
                for binding in partial
                for extended in self._match(branch, universal, pattern, term, binding)
            ]
            if not partial:
                break
        return partial

    def _match(
        self,
        branch: Branch,
        universal: Universal,
        pattern: Term,
        term: Term,
        binding: _Binding,
    ) -> list[_Binding]:
        cc = branch.cc
        if isinstance(pattern, Var):
            if pattern not in universal.vars or pattern.sort != term.sort:
                return []
            if pattern in binding:
                return [binding] if cc.equal(binding[pattern], term) else []
            return [{**binding, pattern: cc.find(term)}]
        if not any(True for _ in term_vars(pattern)):
            return [binding] if cc.equal(pattern, term) else []
        if not isinstance(pattern, Fn):
            return []
        members = self.members.get(cc.find(term), (term,))
        matches: list[_Binding] = []
        for member in members:
            if isinstance(member, Fn) and member.symbol == pattern.symbol:
                matches.extend(self._match_args(branch, universal, pattern.args, member.args))
        return matches



def prove(sequent: Sequent, budget: SearchBudget | None = None) -> ProverOutcome:
    """Search for a closed tableau of ``facts, not goal``.

    Deepens the number of instantiation rounds up to ``budget.gamma_depth``.
    Never raises; exhausted limits are reported as ``BudgetExceeded``.
    """
    budget = budget or SearchBudget()
    started = time.monotonic()
    limits = Limits(budget.max_branch_nodes, started + budget.timeout_ms / 1000)
    used: set[str] = {const.name for const in constants(sequent.goal)}
    for _, fact in sequent.facts:
        used.update(const.name for const in constants(fact))
    outcome: ProverOutcome = NotProved(())
    for rounds in range(1, budget.gamma_depth + 1):
        names = Names(set(used))
        branch = Branch(limits, names)
        for _, fact in sequent.facts:
            branch.push(Signed(True, fact), NO_DEPS, 0)  # noqa: FBT003
        branch.push(Signed(False, sequent.goal), NO_DEPS, 0)  # noqa: FBT003
        search = _Search(rounds, limits, names)
        try:
            result = search.run(branch)
        except BudgetExhaustedError as exhausted:
            outcome = BudgetExceeded(exhausted.limit)
            break
        if isinstance(result, _Closed):
            outcome = Proved(search.closed, rounds, search.choices)
            break
        outcome = NotProved(result.branch.open_literals()[:OPEN_BRANCH_SAMPLE])
        if not result.out_of_rounds:
            break
    LOGGER.debug(
        "Prover finished",
        extra={
            "extra": {
                "outcome": type(outcome).__name__,
                "facts": len(sequent.facts),
                "millis": round((time.monotonic() - started) * 1000),
            },
        },
    )
    return outcome
