import pytest

from focalite.corpus import CorpusEntry, load_corpus, load_manifest, parse_index
from focalite.syntax import ast
from tests.fixtures.sources import corpus_report, corpus_workspace


def test_parse_index_skips_comments_and_blank_lines() -> None:
    manifest = parse_index("# header\n\na.fcl | A B | t1\nb.fcl | C | | FAILED\n")
    assert manifest.entries == (
        CorpusEntry(file="a.fcl", phrases=("A", "B"), theorems=("t1",)),
        CorpusEntry(file="b.fcl", phrases=("C",), theorems=(), verdict="FAILED"),
    )
    assert manifest.files == ("a.fcl", "b.fcl")


def test_manifest_lists_dependency_order() -> None:
    files = load_manifest().files
    assert files[0] == "basic_object.fcl"
    assert files.index("setoid.fcl") < files.index("finite_parts.fcl")
    assert files[-1] == "int_setoid.fcl"


@pytest.mark.parametrize(
    "entry",
    load_manifest().entries,
    ids=lambda entry: entry.file,
)
def test_every_listed_phrase_and_theorem_exists(entry: CorpusEntry) -> None:
    units = {unit.file: unit for unit in load_corpus()}
    unit = units[entry.file]
    assert tuple(phrase.name for phrase in unit.phrases) == entry.phrases
    theorems = {
        method.name
        for phrase in unit.phrases
        if isinstance(phrase, ast.SpeciesDecl)
        for method in phrase.methods
        if isinstance(method, ast.Theorem)
    }
    assert set(entry.theorems) <= theorems


HIERARCHY = {
    ("Injective_relations", "Binary_relations"),
    ("Deterministic_relations", "Binary_relations"),
    ("Left_total_relations", "Binary_relations"),
    ("Surjective_relations", "Binary_relations"),
    ("Functional_relations", "Left_total_relations"),
    ("Functional_relations", "Deterministic_relations"),
    ("Injective_functions", "Functional_relations"),
    ("Injective_functions", "Injective_relations"),
    ("Surjective_functions", "Functional_relations"),
    ("Surjective_functions", "Surjective_relations"),
    ("Bijective_functions", "Injective_functions"),
    ("Bijective_functions", "Surjective_functions"),
}


def test_relation_hierarchy_matches_inherit_clauses() -> None:
    nodes = {name for edge in HIERARCHY for name in edge}
    assert len(nodes) == 9
    edges = {
        (flat.name, parent)
        for flat in corpus_workspace().species
        if flat.name in nodes
        for parent in flat.parents
    }
    assert edges == HIERARCHY


@pytest.mark.parametrize(
    "entry",
    load_manifest().entries,
    ids=lambda entry: entry.file,
)
def test_statements_get_the_expected_verdict(entry: CorpusEntry) -> None:
    species = {name for name in entry.phrases if name in corpus_workspace().env.species}
    for report in corpus_report().statements:
        if report.species in species:
            assert {line.status for line in report.lines} == {entry.verdict}, report.statement
