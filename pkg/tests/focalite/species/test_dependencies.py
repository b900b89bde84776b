import pytest

from focalite.session import dependency_edges, load, render_dependencies
from focalite.species.dependencies import (
    analyze_dependencies,
    conclude_premises,
    dependency_graph,
)
from tests.fixtures.sources import corpus_workspace, source


@pytest.mark.parametrize(
    "edge",
    [
        "equal_spec -> def:equal",
        "equal_spec -> decl:is_contained_spec",
        "equal_reflexive -> decl:equal_spec",
        "union_is_left_unique -> def:is_union_r",
        "union_is_left_unique -> def:is_left_unique",
        "union_is_left_unique -> decl:A!equal_symmetric",
    ],
)
def test_corpus_edges(edge: str) -> None:
    assert edge in dict(dependency_edges(corpus_workspace()))["Binary_relations"]


def test_edges_are_reported_where_the_proof_is_written() -> None:
    groups = dict(dependency_edges(corpus_workspace()))
    assert not any(edge.startswith("equal_spec ") for edge in groups.get("Injective_relations", ()))


def test_species_without_proofs_has_no_edges() -> None:
    workspace = load((source("species Nothing = end;;"),))
    assert workspace.ok
    assert dependency_edges(workspace) == ()
    assert render_dependencies(dependency_edges(workspace)) == ""


def test_rendering_puts_each_species_above_its_edges() -> None:
    groups = (("S", ("a -> def:f", "a -> decl:p")), ("T", ("b -> def:g",)))
    assert render_dependencies(groups) == (
        "species S\na -> def:f\na -> decl:p\nspecies T\nb -> def:g\n"
    )


def test_hypotheses_and_steps_are_local() -> None:
    flat = corpus_workspace().env.species["Finite_parts_by_lists"]
    release_spec = flat.entry("release_spec")
    assert release_spec is not None
    assert release_spec.proof is not None
    dependencies = analyze_dependencies(release_spec.proof)
    assert {"release", "empty", "from_list"} <= set(dependencies.def_deps)
    assert {"empty_spec", "belongs_spec"} <= set(dependencies.decl_deps)
    names = set(dependencies.def_deps) | set(dependencies.decl_deps)
    assert not names & {"H1", "HI", "C1", "<5>1"}


def test_graph_lists_proved_statements_in_table_order() -> None:
    flat = corpus_workspace().env.species["Binary_relations"]
    names = [name for name, _, _ in dependency_graph(flat)]
    assert names.index("equal_spec") < names.index("union_is_left_unique")


def test_conclude_sees_earlier_statements_only() -> None:
    workspace = load(
        (
            source(
                "species P =\n"
                "  signature f : Self -> bool;\n"
                "  property first : all x : Self, f(x);\n"
                "  theorem second : all x : Self, f(x) proof = conclude;\n"
                "  property third : all x : Self, f(x);\n"
                "end;;\n",
            ),
        ),
    )
    assert workspace.ok
    premises = conclude_premises(workspace.env.species["P"])
    assert premises == {"second": ("first",)}


def test_conclude_skips_statements_that_lead_back() -> None:
    workspace = load(
        (
            source(
                "species Q =\n"
                "  signature f : Self -> bool;\n"
                "  theorem first : all x : Self, f(x) proof = by property second;\n"
                "  theorem second : all x : Self, f(x) proof = conclude;\n"
                "end;;\n",
            ),
        ),
    )
    premises = conclude_premises(workspace.env.species["Q"])
    assert premises == {"second": ()}
