from focalite._diagnostics.errors import ErrorCode
from focalite.corpus import corpus_text, load_manifest
from focalite.session import Workspace, load
from focalite.species.collection import interface_of
from focalite.species.model import MethodKind, MethodStatus, instantiate
from focalite.syntax import ast, parse_unit
from tests.fixtures.sources import (
    INT_FILES,
    RELATION_FILES,
    corpus_sources,
    corpus_workspace,
    fixture_source,
    source,
)


def codes(workspace: Workspace) -> list[ErrorCode]:
    return [diagnostic.code for diagnostic in workspace.diagnostics]


def load_with(files: tuple[str, ...], text: str) -> Workspace:
    return load((*corpus_sources(*files), source(text)))


def test_corpus_builds_without_diagnostics() -> None:
    workspace = corpus_workspace()
    assert workspace.diagnostics == ()
    assert [flat.name for flat in workspace.species][:3] == [
        "Basic_object",
        "Setoid",
        "Binary_relations",
    ]
    assert set(workspace.env.collections) == {"IntSetoid", "IntFiniteParts"}


def test_inherited_entries_keep_their_origin() -> None:
    flat = corpus_workspace().env.species["Binary_relations"]
    different = flat.entry("different")
    equal = flat.entry("equal")
    element = flat.entry("element")
    assert different is not None
    assert different.origin == "Setoid"
    assert equal is not None
    assert equal.origin == "Binary_relations"
    assert equal.status is MethodStatus.DEFINED
    assert element is not None
    assert element.status is MethodStatus.DECLARED


def test_proof_of_attaches_to_inherited_property() -> None:
    flat = corpus_workspace().env.species["Binary_relations"]
    reflexive = flat.entry("equal_reflexive")
    assert reflexive is not None
    assert reflexive.kind is MethodKind.STATEMENT
    assert reflexive.status is MethodStatus.PROVED
    assert reflexive.origin == "Binary_relations"
    assert reflexive.decl_deps == ("equal_spec",)


def test_parameters_are_recorded() -> None:
    flat = corpus_workspace().env.species["Finite_parts_by_lists"]
    assert [(param.name, param.interface) for param in flat.params] == [("S", "Setoid")]
    assert "Finite_parts" in flat.parents


def test_redefinition_invalidates_only_dependent_proofs() -> None:
    workspace = load((*corpus_sources(*RELATION_FILES), fixture_source("redefined_equal.fcl")))
    assert workspace.ok
    flat = workspace.env.species["Redefined_relations"]
    spec = flat.entry("equal_spec")
    assert spec is not None
    assert spec.invalidated
    for law in ("equal_reflexive", "equal_symmetric", "equal_transitive"):
        entry = flat.entry(law)
        assert entry is not None
        assert not entry.invalidated


REPROVED = """
species Reproved_relations (A is Setoid, B is Setoid) =
  inherit Binary_relations(A, B), Redefined_relations(A, B);
  proof of equal_spec = by definition of equal property is_contained_spec;
end;;
"""


def test_proof_lost_to_a_later_parent_can_be_given_again() -> None:
    workspace = load(
        (
            *corpus_sources(*RELATION_FILES),
            fixture_source("redefined_equal.fcl"),
            source(REPROVED),
        ),
    )
    assert ErrorCode.ALREADY_PROVED not in codes(workspace)
    flat = workspace.env.species["Reproved_relations"]
    spec = flat.entry("equal_spec")
    assert spec is not None
    assert spec.status is MethodStatus.PROVED
    assert spec.origin == "Reproved_relations"
    assert not spec.invalidated
    assert spec.reproved
    equal = flat.entry("equal")
    assert equal is not None
    assert equal.origin == "Redefined_relations"


def test_unknown_parent() -> None:
    workspace = load([source("species Orphan = inherit Nowhere; end;;")])
    assert codes(workspace) == [ErrorCode.UNKNOWN_SPECIES]
    assert workspace.species == ()


def test_wrong_number_of_arguments() -> None:
    workspace = load_with(
        RELATION_FILES,
        "species Half (A is Setoid) = inherit Binary_relations(A); end;;",
    )
    assert codes(workspace) == [ErrorCode.ARITY]


def test_final_definition_cannot_be_redefined() -> None:
    workspace = load_with(
        RELATION_FILES,
        """
        species Loose (A is Setoid, B is Setoid) =
          inherit Binary_relations(A, B);
          logical let is_left_unique(r) = is_contained(r, r);
        end;;
        """,
    )
    assert codes(workspace) == [ErrorCode.FINAL]


def test_incompatible_redeclaration() -> None:
    workspace = load_with(
        ("basic_object.fcl", "setoid.fcl"),
        "species Odd = inherit Setoid; signature equal : Self -> bool; end;;",
    )
    assert codes(workspace) == [ErrorCode.TYPE_CLASH]


def test_proof_of_unknown_statement() -> None:
    workspace = load_with(
        ("basic_object.fcl", "setoid.fcl"),
        "species Stray = inherit Setoid; proof of nothing = by definition of different; end;;",
    )
    assert codes(workspace) == [ErrorCode.PROOF_TARGET]


def test_inheriting_from_a_collection_is_rejected() -> None:
    workspace = load_with(INT_FILES, "species Copy = inherit IntSetoid; end;;")
    assert codes(workspace) == [ErrorCode.INHERIT_COLLECTION]


def test_argument_must_satisfy_the_parameter_interface() -> None:
    workspace = load_with(
        INT_FILES,
        """
        species Counter = representation = int; let zero = 0; end;;
        collection Counters = implement Counter; end;;
        collection Bad = implement Finite_parts_by_lists(Counters); end;;
        """,
    )
    assert codes(workspace) == [ErrorCode.INTERFACE]
    assert "Counters" in workspace.env.collections
    assert "Bad" not in workspace.env.collections


def test_circular_proofs() -> None:
    workspace = load(
        [
            source(
                """
                species Loop =
                  signature p : Self -> bool;
                  theorem first : all x : Self, p(x) proof = by property second;
                  theorem second : all x : Self, p(x) proof = by property first;
                end;;
                """,
            ),
        ],
    )
    assert codes(workspace) == [ErrorCode.CIRCULAR]


def test_failed_species_does_not_stop_the_file() -> None:
    workspace = load(
        [
            source(
                """
                species Broken = inherit Missing; end;;
                species Fine = signature p : Self -> bool; end;;
                """,
            ),
        ],
    )
    assert codes(workspace) == [ErrorCode.UNKNOWN_SPECIES]
    assert [flat.name for flat in workspace.species] == ["Fine"]


def corpus_inherits() -> list[tuple[str, ast.SpeciesExpr]]:
    """``(species, parent)`` for every inherit clause of the corpus."""
    return [
        (phrase.name, parent)
        for file in load_manifest().files
        for phrase in parse_unit(corpus_text(file), file).phrases
        if isinstance(phrase, ast.SpeciesDecl)
        for parent in phrase.inherits
    ]


def test_inherited_types_are_preserved() -> None:
    species = corpus_workspace().env.species
    for child, parent in corpus_inherits():
        inherited = instantiate(species[parent.name], parent.args)
        flat = species[child]
        for entry in inherited.entries:
            own = flat.entry(entry.name)
            assert own is not None, (child, entry.name)
            assert own.kind is entry.kind
            if entry.is_function:
                assert own.type == entry.type, (child, entry.name)
            else:
                assert own.formula == entry.formula, (child, entry.name)


def test_interfaces_grow_along_inheritance() -> None:
    species = corpus_workspace().env.species
    for child, parent in corpus_inherits():
        parent_interface = interface_of(instantiate(species[parent.name], parent.args))
        child_interface = interface_of(species[child])
        assert set(parent_interface.methods) <= set(child_interface.methods), child
        assert set(parent_interface.statements) <= set(child_interface.statements), child


def test_flattening_is_idempotent() -> None:
    copies: list[str] = []
    for flat in corpus_workspace().species:
        params = ", ".join(f"{p.name} is {p.interface}" for p in flat.params)
        args = ", ".join(p.name for p in flat.params)
        header = f"Copy_of_{flat.name} ({params})" if params else f"Copy_of_{flat.name}"
        parent = f"{flat.name}({args})" if args else flat.name
        copies.append(f"species {header} =\n  inherit {parent};\nend;;\n")
    workspace = load((*corpus_sources(), source("".join(copies), "copies.fcl")))
    assert workspace.ok
    for flat in corpus_workspace().species:
        copy = workspace.env.species[f"Copy_of_{flat.name}"]
        assert copy.entries == flat.entries, flat.name
        assert copy.carrier == flat.carrier
        assert copy.params == flat.params
