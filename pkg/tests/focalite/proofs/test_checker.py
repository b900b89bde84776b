import pytest

from focalite._diagnostics.errors import ErrorCode
from focalite.corpus import corpus_text, load_manifest
from focalite.exceptions import ProofStructureError, UnknownCitationError
from focalite.logic.formulas import constants
from focalite.proofs.checker import (
    WHOLE_PROOF,
    Obligation,
    check_proof,
    discharge,
    obligations_of,
)
from focalite.proofs.report import CheckReport, StatementReport
from focalite.prover.budget import SearchBudget
from focalite.prover.sequent import Proved, Sequent
from focalite.prover.tableau import prove
from focalite.session import CheckOptions, SourceFile, check_sources, load
from tests.fixtures.sources import (
    FINITE_PARTS_FILES,
    NO_TIMES,
    RELATION_FILES,
    SETOID_FILES,
    corpus_report,
    corpus_sources,
    corpus_workspace,
    fixture_source,
    mutated,
    source,
)

WRONG = """
species Wrong =
  inherit Setoid;
  theorem bad : all x y : Self, equal(x, y)
    proof = by property equal_reflexive;
end;;
"""


def statement(report: CheckReport, species: str, name: str) -> StatementReport:
    return next(s for s in report.statements if s.species == species and s.statement == name)


def failed_steps(report: StatementReport) -> list[str]:
    return [line.step for line in report.lines if line.status == "FAILED"]


def test_corpus_checks() -> None:
    report = corpus_report()
    assert report.ok, report.render(timings=False)
    assert report.all_diagnostics() == ()


@pytest.mark.parametrize(
    ("file", "theorem"),
    [(entry.file, theorem) for entry in load_manifest().entries for theorem in entry.theorems],
)
def test_manifest_theorems_are_proved(file: str, theorem: str) -> None:
    reports = [s for s in corpus_report().statements if s.statement == theorem]
    assert reports, f"{theorem} from {file} was not checked"
    assert all(report.proved for report in reports)


def test_removed_hypothesis_fails_only_the_citing_step() -> None:
    broken = mutated(
        "binary_relations.fcl",
        "<1>1 hypothesis Hlu1 : is_left_unique(r1),\n           hypothesis Hlu2",
        "<1>1 hypothesis Hlu2",
    )
    report = check_sources((*corpus_sources(*SETOID_FILES), broken), NO_TIMES)
    union = statement(report, "Binary_relations", "union_is_left_unique")
    assert failed_steps(union) == ["<3>1"]
    assert [d.code for d in union.diagnostics] == [ErrorCode.UNKNOWN_HYPOTHESIS]
    assert union.diagnostics[0].step == "<3>1"
    assert statement(report, "Binary_relations", "equal_spec").proved
    assert not report.ok


def test_missing_base_case_is_reported() -> None:
    text = corpus_text("finite_parts.fcl")
    start = text.index("      <1>b prove belongs(e1, release([], e2))")
    end = text.index("      <1>i assume t : list(S), assume h : S,", start)
    broken = SourceFile(name="finite_parts.fcl", text=text[:start] + text[end:])
    report = check_sources((*corpus_sources(*SETOID_FILES), broken), NO_TIMES)
    release = statement(report, "Finite_parts_by_lists", "release_spec")
    assert not release.proved
    assert ErrorCode.MISSING_CASE in {d.code for d in release.diagnostics}
    assert statement(report, "Finite_parts_by_lists", "empty_spec").proved


def test_redefinition_invalidates_dependent_proofs_only() -> None:
    report = check_sources(
        (*corpus_sources(*RELATION_FILES), fixture_source("redefined_equal.fcl")),
        NO_TIMES,
    )
    equal_spec = statement(report, "Redefined_relations", "equal_spec")
    (line,) = equal_spec.lines
    assert (line.step, line.status) == (WHOLE_PROOF, "UNPROVED")
    assert [d.code for d in equal_spec.diagnostics] == [ErrorCode.INVALIDATED]
    for name in ("equal_reflexive", "equal_symmetric", "equal_transitive"):
        (inherited,) = statement(report, "Redefined_relations", name).lines
        assert (inherited.step, inherited.status) == (WHOLE_PROOF, "PROVED")
    assert not report.ok


def test_unprovable_theorem_fails() -> None:
    report = check_sources((*corpus_sources(*SETOID_FILES), source(WRONG)), NO_TIMES)
    bad = statement(report, "Wrong", "bad")
    assert [line.status for line in bad.lines] == ["FAILED"]
    assert [d.code for d in bad.diagnostics] == [ErrorCode.OBLIGATION]
    assert statement(report, "Wrong", "same_is_not_different").proved


def test_exhausted_budget_is_not_a_failure() -> None:
    options = CheckOptions(budget=SearchBudget(max_branch_nodes=1), timings=False)
    report = check_sources((*corpus_sources(*SETOID_FILES), source(WRONG)), options)
    bad = statement(report, "Wrong", "bad")
    assert [line.status for line in bad.lines] == ["BUDGET"]
    assert [d.code for d in bad.diagnostics] == [ErrorCode.BUDGET]


def test_parallel_discharge_matches_sequential() -> None:
    sequential = check_sources(corpus_sources(*FINITE_PARTS_FILES), NO_TIMES)
    parallel = check_sources(
        corpus_sources(*FINITE_PARTS_FILES),
        CheckOptions(jobs=2, timings=False),
    )
    assert parallel.render(timings=False) == sequential.render(timings=False)


def test_check_proof_of_single_statement() -> None:
    workspace = corpus_workspace()
    flat = workspace.env.species["Binary_relations"]
    report = check_proof("equal_spec", flat, workspace.env)
    assert report.proved
    assert report.lines[0].step == WHOLE_PROOF


def test_check_proof_rejects_unknown_and_unproved() -> None:
    workspace = corpus_workspace()
    with pytest.raises(UnknownCitationError):
        check_proof("nothing", workspace.env.species["Setoid"], workspace.env)
    with pytest.raises(ProofStructureError):
        check_proof("release_spec", workspace.env.species["Finite_parts"], workspace.env)


def test_obligations_cover_own_proofs_only() -> None:
    workspace = corpus_workspace()
    obligations = obligations_of(workspace.env.species["Binary_relations"], workspace.env)
    assert {obligation.species for obligation in obligations} == {"Binary_relations"}
    assert "same_is_not_different" not in {obligation.statement for obligation in obligations}


AGAIN = """
species Again =
  inherit Setoid;
  theorem refl_again : all x : Self, equal(x, x)
    proof = conclude;
end;;
"""


def test_whole_proof_conclude_uses_earlier_statements() -> None:
    report = check_sources((*corpus_sources(*SETOID_FILES), source(AGAIN)), NO_TIMES)
    again = statement(report, "Again", "refl_again")
    assert [(line.step, line.status) for line in again.lines] == [(WHOLE_PROOF, "PROVED")]
    workspace = load((*corpus_sources(*SETOID_FILES), source(AGAIN)))
    flat = workspace.env.species["Again"]
    assert check_proof("refl_again", flat, workspace.env).proved


INDUCTION = """
species Lists =
  theorem all_empty : all l : list(int), l = []
  proof =
    <0>b {base}
    <0>i {inductive}
    <0>f conclude;
end;;
"""
BASE = "prove [] = [] conclude"
INDUCTIVE = (
    "assume t : list(int), assume h : int, hypothesis HI : t = [], prove h :: t = [] {by}"
)


def check_induction(base: str, inductive: str) -> StatementReport:
    text = INDUCTION.format(base=base, inductive=inductive)
    return statement(check_sources((source(text),), NO_TIMES), "Lists", "all_empty")


@pytest.mark.parametrize(
    ("base", "inductive", "failed"),
    [
        (
            BASE,
            "assume t : list(int), assume h : int, hypothesis HI : t = [],"
            " hypothesis Bogus : false, prove h :: t = [] by hypothesis Bogus",
            "<0>i",
        ),
        (
            BASE,
            "assume t : list(int), assume h k : int, hypothesis HI : t = [],"
            " prove h :: t = [] by hypothesis HI",
            "<0>i",
        ),
        (
            BASE,
            "assume t : list(int), assume h : int, prove h :: t = [] conclude",
            "<0>i",
        ),
        (
            "hypothesis Bogus : false, prove [] = [] by hypothesis Bogus",
            INDUCTIVE.format(by="by hypothesis HI"),
            "<0>b",
        ),
    ],
)
def test_induction_cases_assume_exactly_the_scheme(
    base: str,
    inductive: str,
    failed: str,
) -> None:
    report = check_induction(base, inductive)
    assert not report.proved
    assert failed in failed_steps(report)
    assert ErrorCode.CASE_MISMATCH in {d.code for d in report.diagnostics}


def test_false_step_case_is_not_closed_by_induction() -> None:
    report = check_induction(BASE, INDUCTIVE.format(by="by hypothesis HI"))
    assert not report.proved
    assert failed_steps(report) == ["<0>i"]
    assert [d.code for d in report.diagnostics] == [ErrorCode.OBLIGATION]


def corpus_obligations() -> list[Obligation]:
    workspace = corpus_workspace()
    return [
        obligation
        for flat in workspace.species
        for obligation in obligations_of(flat, workspace.env)
    ]


def test_obligations_only_mention_assumed_names() -> None:
    checked = 0
    for obligation in corpus_obligations():
        if obligation.sequent is None:
            continue
        formulas = [formula for _, formula in obligation.sequent.facts]
        formulas.append(obligation.sequent.goal)
        in_scope = set(obligation.assumed)
        for formula in formulas:
            assert set(constants(formula)) <= in_scope, (obligation.statement, obligation.label)
        checked += 1
    assert checked > 0


def test_every_theorem_needs_its_citations() -> None:
    budget = SearchBudget(gamma_depth=1)
    needed: dict[tuple[str, str], bool] = {}
    for obligation in corpus_obligations():
        if obligation.sequent is None or obligation.citations == ("conclude",):
            continue
        key = (obligation.species, obligation.statement)
        if needed.get(key):
            continue
        bare = Sequent((), obligation.sequent.goal)
        needed[key] = not isinstance(prove(bare, budget), Proved)
    assert needed
    assert [key for key, value in needed.items() if not value] == []


STEPS = """
species Steps =
  inherit Setoid;
  theorem swap : all x y : Self, equal(x, y) -> equal(y, x)
  proof =
    <1>1 assume x y : Self, hypothesis H : equal(x, y), prove equal(y, x)
         by hypothesis H property equal_symmetric
{extra}    <1>f qed by step <1>1;
end;;
"""
UNUSED_STEP = "    <1>2 assume z : Self, prove equal(z, z) by property equal_reflexive\n"


def test_removing_an_uncited_step_changes_nothing_else() -> None:
    def obligations(extra: str) -> dict[str, Obligation]:
        workspace = load((*corpus_sources(*SETOID_FILES), source(STEPS.format(extra=extra))))
        flat = workspace.env.species["Steps"]
        return {o.label: o for o in obligations_of(flat, workspace.env)}

    full = obligations(UNUSED_STEP)
    trimmed = obligations("")
    assert set(full) == {"<1>1", "<1>2", "<1>f"}
    assert set(trimmed) == {"<1>1", "<1>f"}
    for label, obligation in trimmed.items():
        assert obligation.sequent == full[label].sequent
        line, diagnostic = discharge(obligation)
        assert (line.status, diagnostic) == ("PROVED", None)


GIVEN_AGAIN = """
species Given_again (A is Setoid, B is Setoid) =
  inherit Binary_relations(A, B), Redefined_relations(A, B);
  proof of equal_spec = by definition of equal property is_contained_spec;
end;;
"""


def test_proof_given_again_after_invalidation_is_noted() -> None:
    report = check_sources(
        (
            *corpus_sources(*RELATION_FILES),
            fixture_source("redefined_equal.fcl"),
            source(GIVEN_AGAIN),
        ),
        NO_TIMES,
    )
    notes = [
        d
        for statement in report.statements
        if (statement.species, statement.statement) == ("Given_again", "equal_spec")
        for d in statement.diagnostics
        if d.code is ErrorCode.REPROVED
    ]
    assert len(notes) == 1
    assert notes[0].severity == "info"
    assert all(d.code is not ErrorCode.REPROVED for d in report.diagnostics)
