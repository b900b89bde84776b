"""Turning hierarchical proofs into prover obligations."""

import logging
import time
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field

from focalite._diagnostics.errors import Error, ErrorCode, Span
from focalite._diagnostics.messages import Diagnostic, ObligationLine, ObligationStatus
from focalite.exceptions import (
    CaseMismatchError,
    FocaliteError,
    MissingCaseError,
    NotDefinedError,
    ProofStructureError,
    StepOutOfScopeError,
    UnknownCitationError,
    UnknownHypothesisError,
)
from focalite.logic.axioms import unfold_definition
from focalite.logic.convert import Converter
from focalite.logic.formulas import Const, Formula, alpha_equal, format_kernel, implies_all
from focalite.logic.induction import InductionScheme, induction_scheme
from focalite.logic.substitution import close_over
from focalite.proofs.context import StepContext
from focalite.proofs.report import StatementReport
from focalite.prover.budget import SearchBudget
from focalite.prover.sequent import BudgetExceeded, NotProved, Proved, Sequent
from focalite.prover.tableau import prove
from focalite.species.dependencies import conclude_premises
from focalite.species.flatten import SpeciesEnv
from focalite.species.model import FlatSpecies, MethodKind, qualify
from focalite.syntax import ast
from focalite.syntax.printer import format_type

LOGGER = logging.getLogger(__name__)

WHOLE_PROOF = "-"
BASE_CASE = "b"
INDUCTIVE_CASE = "i"

type Facts = tuple[tuple[str, Formula], ...]


@dataclass(frozen=True, slots=True)
class Obligation:
    """One proof step to discharge.

    ``sequent`` is ``None`` when the step failed before reaching the prover
    (``error`` says why) or when the induction rule closes it.
    """

    species: str
    statement: str
    label: str
    sequent: Sequent | None
    citations: tuple[str, ...] = ()
    assumed: tuple[Const, ...] = ()
    error: Error | None = None
    by_induction: bool = False
    span: Span = field(default_factory=Span, compare=False)


@dataclass(frozen=True, slots=True)
class _Opened:
    context: StepContext
    consts: tuple[Const, ...]
    hypotheses: Facts
    goal: Formula

    @property
    def statement(self) -> Formula:
        """The step as a fact for later siblings: closed over its own assumptions."""
        premises = tuple(formula for _, formula in self.hypotheses)
        return close_over(self.consts, implies_all(premises, self.goal))


type _CaseCheck = Callable[[_Opened], None]


class ProofWalker:
    """Collects the obligations of one statement's proof, in step preorder."""

    def __init__(
        self,
        flat: FlatSpecies,
        env: SpeciesEnv,
        converter: Converter,
        statement: str,
        premises: tuple[str, ...] = (),
    ) -> None:
        self.flat = flat
        self.env = env
        self.converter = converter
        self.statement = statement
        self.premises = premises
        self.obligations: list[Obligation] = []
        self._statements: dict[str, Formula] = {}
        self._definitions: dict[str, Facts] = {}

    def run(self, proof: ast.Proof, goal: Formula, span: Span) -> tuple[Obligation, ...]:
        match proof:
            case ast.Justification():
                self._justify(WHOLE_PROOF, proof, goal, StepContext(), span)
            case ast.Steps():
                self._steps(proof, goal, StepContext())
        return tuple(self.obligations)

    # Recording

    def _record(
        self,
        label: str,
        span: Span,
        sequent: Sequent | None,
        citations: tuple[str, ...] = (),
        *,
        assumed: tuple[Const, ...] = (),
        by_induction: bool = False,
    ) -> None:
        self.obligations.append(
            Obligation(
                species=self.flat.name,
                statement=self.statement,
                label=label,
                sequent=sequent,
                citations=citations,
                assumed=assumed,
                by_induction=by_induction,
                span=span,
            ),
        )

    def fail(self, label: str, span: Span, error: FocaliteError) -> None:
        located = error.located(span, label if label != WHOLE_PROOF else None)
        LOGGER.debug("Proof step failed", extra={"extra": {"step": label, "code": error.code}})
        self.obligations.append(
            Obligation(
                species=self.flat.name,
                statement=self.statement,
                label=label,
                sequent=None,
                error=located.error,
                span=span,
            ),
        )

    # Structure

    def _steps(self, steps: ast.Steps, goal: Formula, context: StepContext) -> None:
        checks: dict[str, _CaseCheck] = {}
        induction_error: FocaliteError | None = None
        if any(s.ident in (BASE_CASE, INDUCTIVE_CASE) and not s.is_terminal for s in steps.steps):
            try:
                checks = self._induction_checks(steps, goal)
            except FocaliteError as error:
                induction_error = error
        siblings: list[tuple[str, Formula]] = []
        for step in steps.steps:
            inner = context.with_steps(tuple(siblings))
            if not step.is_terminal:
                statement = self._step(step, inner, checks.get(step.ident))
                if statement is not None:
                    siblings.append((step.label, statement))
            elif induction_error is not None:
                self.fail(step.label, step.span, induction_error)
            elif checks:
                self._record(step.label, step.span, None, ("induction",), by_induction=True)
            else:
                self._terminal(step, goal, inner)

    def _open(self, step: ast.Step, context: StepContext, goal: Formula | None) -> _Opened:
        names = tuple((name, self.converter.norm(type_)) for name, type_ in step.assumed)
        inner, consts = context.assume(names)
        hypotheses = tuple(
            (h.name, self.converter.formula(h.formula, inner.scope())) for h in step.hypotheses
        )
        inner = inner.suppose(hypotheses)
        if step.goal is not None:
            goal = self.converter.formula(step.goal, inner.scope())
        if goal is None:
            msg = "A step needs a goal"
            raise ProofStructureError(msg)
        return _Opened(inner, consts, hypotheses, goal)

    def _step(
        self,
        step: ast.Step,
        context: StepContext,
        check: _CaseCheck | None,
    ) -> Formula | None:
        try:
            opened = self._open(step, context, None)
        except FocaliteError as error:
            self.fail(step.label, step.span, error)
            return None
        if check is not None:
            try:
                check(opened)
            except FocaliteError as error:
                self.fail(step.label, step.span, error)
        self._body(step, opened)
        return opened.statement

    def _terminal(self, step: ast.Step, goal: Formula, context: StepContext) -> None:
        if step.assumptions or step.hypotheses:
            self.fail(
                step.label,
                step.span,
                ProofStructureError("The closing step of a level cannot assume anything"),
            )
            return
        self._body(step, _Opened(context, (), (), goal))

    def _body(self, step: ast.Step, opened: _Opened) -> None:
        match step.body:
            case ast.Justification():
                self._justify(step.label, step.body, opened.goal, opened.context, step.span)
            case ast.Steps():
                self._steps(step.body, opened.goal, opened.context)

    # Induction

    def _induction_checks(self, steps: ast.Steps, goal: Formula) -> dict[str, _CaseCheck]:
        scheme = induction_scheme(goal)
        idents = {s.ident for s in steps.steps if not s.is_terminal}
        for case in (BASE_CASE, INDUCTIVE_CASE):
            if case not in idents:
                raise MissingCaseError(case)
        return {
            BASE_CASE: lambda opened: _check_base(scheme, opened),
            INDUCTIVE_CASE: lambda opened: _check_inductive(scheme, opened),
        }

    # Justifications

    def _justify(
        self,
        label: str,
        justification: ast.Justification,
        goal: Formula,
        context: StepContext,
        span: Span,
    ) -> None:
        try:
            facts, cited = self._facts(justification, context)
        except FocaliteError as error:
            self.fail(label, span, error.located(justification.span))
            return
        assumed = tuple(const for _, const in context.consts)
        self._record(label, span, Sequent(facts, goal), cited, assumed=assumed)

    def _facts(
        self,
        justification: ast.Justification,
        context: StepContext,
    ) -> tuple[Facts, tuple[str, ...]]:
        if justification.conclude:
            return (*context.facts(), *self._premise_facts()), ("conclude",)
        facts: list[tuple[str, Formula]] = []
        cited: list[str] = []
        for citation in justification.citations:
            for name in citation.names:
                cited.append(f"{citation.kind.value} {name}")
                try:
                    facts.extend(self._cite(citation.kind, name, context))
                except FocaliteError as error:
                    raise error.located(citation.span) from None
        return tuple(facts), tuple(cited)

    def _premise_facts(self) -> Facts:
        facts: list[tuple[str, Formula]] = []
        for name in self.premises:
            try:
                facts.append((name, self._statement(name)))
            except FocaliteError:
                LOGGER.debug("Skipping premise %s", name)
        return tuple(facts)

    def _cite(self, kind: ast.CitationKind, name: str, context: StepContext) -> Facts:
        match kind:
            case ast.CitationKind.HYPOTHESIS:
                hypothesis = context.hypothesis(name)
                if hypothesis is None:
                    raise UnknownHypothesisError(name)
                return ((name, hypothesis),)
            case ast.CitationKind.STEP:
                statement = context.step(name)
                if statement is None:
                    raise StepOutOfScopeError(name)
                return ((name, statement),)
            case ast.CitationKind.PROPERTY | ast.CitationKind.THEOREM:
                return ((name, self._statement(name)),)
            case ast.CitationKind.DEFINITION:
                return self._definition(name)

    def _statement(self, name: str) -> Formula:
        if name in self._statements:
            return self._statements[name]
        formula: ast.Formula | None = None
        if "!" in name:
            owner, method = name.split("!", 1)
            entries = self.env.interface_entries(owner, self.flat.params) or ()
            entry = next((e for e in entries if e.name == method), None)
            methods = frozenset(e.name for e in entries if e.kind is not MethodKind.STATEMENT)
            if entry is not None and entry.formula is not None:
                formula = qualify(entry.formula, owner, methods)
        else:
            entry = self.flat.entry(name)
            formula = entry.formula if entry is not None else None
        if entry is None or entry.kind is not MethodKind.STATEMENT or formula is None:
            raise UnknownCitationError(name)
        converted = self.converter.formula(formula)
        self._statements[name] = converted
        return converted

    def _definition(self, name: str) -> Facts:
        if name not in self._definitions:
            if "!" in name:
                owner, method = name.split("!", 1)
                if self.env.interface_entries(owner, self.flat.params) is None:
                    raise UnknownCitationError(name)
                raise NotDefinedError(method)
            axioms = unfold_definition(name, self.converter)
            self._definitions[name] = tuple(
                (f"definition of {name}#{index}", axiom.axiom)
                for index, axiom in enumerate(axioms, start=1)
            )
        return self._definitions[name]


def _check_base(scheme: InductionScheme, opened: _Opened) -> None:
    if opened.consts or opened.hypotheses:
        msg = "a base case without assumptions"
        raise CaseMismatchError(msg, _assumed(opened))
    if not alpha_equal(opened.goal, scheme.base):
        raise CaseMismatchError(format_kernel(scheme.base), format_kernel(opened.goal))


def _check_inductive(scheme: InductionScheme, opened: _Opened) -> None:
    _, expected = scheme.step
    tails = [c for c in opened.consts if c.sort == scheme.tail.sort]
    heads = [c for c in opened.consts if c.sort == scheme.head.sort and c not in tails]
    if len(tails) != 1 or len(heads) != 1 or len(opened.consts) != len(tails) + len(heads):
        msg = f"a head and a tail for {format_kernel(expected)}"
        raise CaseMismatchError(msg, _assumed(opened))
    hypothesis, goal = scheme.step_for(heads[0], tails[0])
    if not alpha_equal(opened.goal, goal):
        raise CaseMismatchError(format_kernel(expected), format_kernel(opened.goal))
    if len(opened.hypotheses) != 1 or not alpha_equal(opened.hypotheses[0][1], hypothesis):
        raise CaseMismatchError(format_kernel(hypothesis), _assumed(opened))


def _assumed(opened: _Opened) -> str:
    parts = [f"{c.name} : {format_type(c.sort)}" for c in opened.consts]
    parts.extend(format_kernel(f) for _, f in opened.hypotheses)
    return ", ".join(parts) or "no assumption"


def obligations_of(flat: FlatSpecies, env: SpeciesEnv) -> tuple[Obligation, ...]:
    """Obligations of every proof this species supplies, in declaration then step order."""
    converter = Converter(flat, env)
    premises = conclude_premises(flat)
    obligations: list[Obligation] = []
    for entry in flat.statements():
        if entry.proof is None or entry.formula is None or entry.origin != flat.name:
            continue
        walker = ProofWalker(flat, env, converter, entry.name, premises.get(entry.name, ()))
        try:
            goal = converter.formula(entry.formula)
        except FocaliteError as error:
            walker.fail(WHOLE_PROOF, entry.span, error)
            obligations.extend(walker.obligations)
            continue
        obligations.extend(walker.run(entry.proof, goal, entry.span))
    LOGGER.debug("Collected obligations", extra={"extra": {"species": flat.name}})
    return tuple(obligations)


def invalidated_error(name: str, span: Span) -> Error:
    description = f"The proof of {name} relied on a definition that has been redefined"
    return Error(code=ErrorCode.INVALIDATED, description=description, span=span)


def reproved_note(name: str, span: Span) -> Error:
    description = f"The proof of {name} replaces an inherited proof that was invalidated"
    return Error(code=ErrorCode.REPROVED, description=description, span=span)


def discharge(
    obligation: Obligation,
    budget: SearchBudget | None = None,
) -> tuple[ObligationLine, Diagnostic | None]:
    """Run the prover on one obligation and render its report line."""

    def line(
        status: ObligationStatus,
        millis: int = 0,
        detail: str | None = None,
    ) -> ObligationLine:
        return ObligationLine(
            species=obligation.species,
            statement=obligation.statement,
            step=obligation.label,
            status=status,
            millis=millis,
            detail=detail,
        )

    if obligation.error is not None:
        error = obligation.error
        return line("FAILED", detail=error.message), Diagnostic.from_error(error)
    if obligation.by_induction or obligation.sequent is None:
        return line("PROVED"), None
    started = time.perf_counter()
    outcome = prove(obligation.sequent, budget)
    millis = round((time.perf_counter() - started) * 1000)
    step = obligation.label if obligation.label != WHOLE_PROOF else None
    match outcome:
        case Proved():
            return line("PROVED", millis), None
        case NotProved(open_branch):
            LOGGER.debug("Open obligation %s:\n%s", obligation.label, obligation.sequent.render())
            goal = format_kernel(obligation.sequent.goal)
            description = f"Could not prove {goal}"
            error = Error(
                code=ErrorCode.OBLIGATION,
                description=description,
                span=obligation.span,
                step=step,
            )
            detail = "; ".join(open_branch)
            return line("FAILED", millis, detail), Diagnostic.from_error(error)
        case BudgetExceeded(limit):
            description = f"Search budget exhausted ({limit})"
            error = Error(
                code=ErrorCode.BUDGET,
                description=description,
                span=obligation.span,
                step=step,
            )
            return line("BUDGET", millis, limit), Diagnostic.from_error(error)


type Discharger = Callable[
    [tuple[Obligation, ...]],
    Iterable[tuple[ObligationLine, Diagnostic | None]],
]


def check_species(
    flat: FlatSpecies,
    env: SpeciesEnv,
    budget: SearchBudget | None = None,
    *,
    run: Discharger | None = None,
    inherited: Mapping[tuple[str, str], bool] | None = None,
) -> tuple[StatementReport, ...]:
    """Check every statement of a flattened, typechecked species.

    Own proofs are discharged through ``run`` (sequentially by default);
    inherited proofs keep the verdict they had in the species that gave them.
    """
    obligations = obligations_of(flat, env)
    if run is None:
        results = [discharge(obligation, budget) for obligation in obligations]
    else:
        results = list(run(obligations))
    by_statement: dict[str, list[tuple[ObligationLine, Diagnostic | None]]] = {}
    for obligation, result in zip(obligations, results, strict=True):
        by_statement.setdefault(obligation.statement, []).append(result)
    reports: list[StatementReport] = []
    for entry in flat.statements():
        if entry.name in by_statement:
            pairs = by_statement[entry.name]
            diagnostics = [d for _, d in pairs if d is not None]
            if entry.reproved:
                diagnostics.append(Diagnostic.from_error(reproved_note(entry.name, entry.span)))
            reports.append(
                StatementReport(
                    species=flat.name,
                    statement=entry.name,
                    lines=tuple(line for line, _ in pairs),
                    diagnostics=tuple(diagnostics),
                ),
            )
        elif entry.invalidated:
            error = invalidated_error(entry.name, entry.span)
            line = ObligationLine(
                species=flat.name,
                statement=entry.name,
                step=WHOLE_PROOF,
                status="UNPROVED",
                detail=error.message,
            )
            diagnostic = Diagnostic.from_error(error)
            reports.append(
                StatementReport(
                    species=flat.name,
                    statement=entry.name,
                    lines=(line,),
                    diagnostics=(diagnostic,),
                ),
            )
        elif entry.proof is not None and entry.origin != flat.name:
            verdict = (inherited or {}).get((entry.origin, entry.name), True)
            line = ObligationLine(
                species=flat.name,
                statement=entry.name,
                step=WHOLE_PROOF,
                status="PROVED" if verdict else "FAILED",
                detail=None if verdict else f"inherited proof failed in {entry.origin}",
            )
            reports.append(StatementReport(species=flat.name, statement=entry.name, lines=(line,)))
    LOGGER.info("Checked %s", flat.name, extra={"extra": {"obligations": len(obligations)}})
    return tuple(reports)


def check_proof(
    name: str,
    flat: FlatSpecies,
    env: SpeciesEnv,
    budget: SearchBudget | None = None,
) -> StatementReport:
    """Check the proof of a single statement of ``flat``."""
    entry = flat.entry(name)
    if entry is None or entry.kind is not MethodKind.STATEMENT:
        raise UnknownCitationError(name)
    if entry.proof is None or entry.formula is None:
        msg = f"{name} has no proof to check"
        raise ProofStructureError(msg, entry.span)
    converter = Converter(flat, env)
    walker = ProofWalker(flat, env, converter, name, conclude_premises(flat).get(name, ()))
    obligations = walker.run(entry.proof, converter.formula(entry.formula), entry.span)
    pairs = [discharge(obligation, budget) for obligation in obligations]
    return StatementReport(
        species=flat.name,
        statement=name,
        lines=tuple(line for line, _ in pairs),
        diagnostics=tuple(d for _, d in pairs if d is not None),
    )
