"""Collections: completed species with a hidden carrier."""

import logging
from collections.abc import Collection
from dataclasses import dataclass

from focalite.exceptions import CarrierUndefinedError, IncompleteSpeciesError
from focalite.species.flatten import SpeciesEnv, flatten
from focalite.species.model import CollectionValue, FlatSpecies, MethodKind
from focalite.syntax import ast

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Interface:
    """What users of a species or collection see: signatures and statements, no bodies."""

    name: str
    methods: tuple[tuple[str, MethodKind, ast.TypeExpr | None], ...]
    statements: tuple[tuple[str, ast.Formula | None], ...]

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _, _ in self.methods) + tuple(
            name for name, _ in self.statements
        )


def interface_of(flat: FlatSpecies) -> Interface:
    return Interface(
        name=flat.name,
        methods=tuple(
            (entry.name, entry.kind, entry.type)
            for entry in flat.entries
            if entry.kind is not MethodKind.STATEMENT
        ),
        statements=tuple((entry.name, entry.formula) for entry in flat.statements()),
    )


def missing_methods(flat: FlatSpecies, unproved: Collection[str] = ()) -> tuple[str, ...]:
    """Names that keep ``flat`` from being complete, in table order."""
    return tuple(
        entry.name
        for entry in flat.entries
        if (entry.is_function and entry.definition is None)
        or (
            entry.kind is MethodKind.STATEMENT
            and (entry.proof is None or entry.invalidated or entry.name in unproved)
        )
    )


def collection_species(decl: ast.CollectionDecl, env: SpeciesEnv) -> FlatSpecies:
    """The method table a collection would freeze: its species applied to the arguments."""
    frame = ast.SpeciesDecl(
        name=decl.name,
        params=(),
        inherits=(decl.implements,),
        methods=(),
        span=decl.span,
    )
    return flatten(frame, env)


def make_collection(
    name: str,
    flat: FlatSpecies,
    *,
    unproved: Collection[str] = (),
) -> CollectionValue:
    """Freeze a completely defined and proved species.

    ``unproved`` names statements whose proofs did not check.
    """
    species_name = flat.parents[0] if flat.parents else flat.name
    missing = missing_methods(flat, unproved)
    if missing:
        raise IncompleteSpeciesError(species_name, missing, flat.span)
    if flat.carrier is None:
        raise CarrierUndefinedError(species_name, flat.span)
    LOGGER.info("Made collection %s", name, extra={"extra": {"species": species_name}})
    return CollectionValue(name, species_name, flat)
