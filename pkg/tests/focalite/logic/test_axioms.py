import pytest

from focalite.exceptions import NotDefinedError, UnknownCitationError
from focalite.logic.axioms import unfold_definition
from focalite.logic.convert import Converter
from focalite.logic.formulas import Equals, Forall, Iff, Implies, format_kernel
from tests.fixtures.sources import corpus_workspace


def converter(species: str) -> Converter:
    env = corpus_workspace().env
    return Converter(env.species[species], env)


def test_boolean_function_gives_one_equivalence_per_case() -> None:
    axioms = unfold_definition("belongs", converter("Finite_parts_by_lists"))
    assert [axiom.source for axiom in axioms] == ["belongs", "belongs"]
    nil_case, cons_case = (axiom.axiom for axiom in axioms)
    assert isinstance(nil_case, Forall)
    assert isinstance(nil_case.body, Iff)
    assert "[]" in format_kernel(nil_case)
    assert "::" in format_kernel(cons_case)


def test_conditionals_split_into_guarded_equations() -> None:
    axioms = unfold_definition("release", converter("Finite_parts_by_lists"))
    assert len(axioms) == 3
    bodies = [axiom.axiom.body for axiom in axioms if isinstance(axiom.axiom, Forall)]
    assert len(bodies) == 3
    assert isinstance(bodies[0], Equals)
    assert all(isinstance(body, Implies) for body in bodies[1:])


def test_logical_definition_gives_single_equivalence() -> None:
    (axiom,) = unfold_definition("is_left_unique", converter("Binary_relations"))
    assert isinstance(axiom.axiom, Forall)
    assert isinstance(axiom.axiom.body, Iff)


@pytest.mark.parametrize(
    ("species", "name", "error"),
    [
        ("Finite_parts", "belongs", NotDefinedError),
        ("Finite_parts_by_lists", "release_spec", UnknownCitationError),
        ("Finite_parts_by_lists", "missing", UnknownCitationError),
    ],
)
def test_unfold_rejects(species: str, name: str, error: type[Exception]) -> None:
    with pytest.raises(error):
        unfold_definition(name, converter(species))
