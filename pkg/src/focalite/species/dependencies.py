from collections.abc import Iterator
from dataclasses import dataclass

from focalite.exceptions import CircularProofError
from focalite.species.model import FlatSpecies, MethodEntry, MethodKind
from focalite.syntax import ast


@dataclass(frozen=True, slots=True)
class Dependencies:
    def_deps: tuple[str, ...]
    decl_deps: tuple[str, ...]


def _citations(proof: ast.Proof) -> Iterator[ast.Citation]:
    if isinstance(proof, ast.Justification):
        yield from proof.citations
        return
    for step in proof.steps:
        yield from _citations(step.body)


def analyze_dependencies(proof: ast.Proof) -> Dependencies:
    """Names whose definitions are unfolded and statements cited by a proof.

    Hypothesis and step citations are local to the proof and contribute nothing.
    """
    definitions: dict[str, None] = {}
    declarations: dict[str, None] = {}
    for citation in _citations(proof):
        if citation.kind is ast.CitationKind.DEFINITION:
            definitions.update(dict.fromkeys(citation.names))
        elif citation.kind in {ast.CitationKind.PROPERTY, ast.CitationKind.THEOREM}:
            declarations.update(dict.fromkeys(citation.names))
    decl = tuple(name for name in declarations if name not in definitions)
    return Dependencies(tuple(definitions), decl)


def check_circularity(flat: FlatSpecies) -> None:
    """Reject statements whose proofs depend on themselves through cited statements."""
    proved = {
        entry.name: entry.decl_deps
        for entry in flat.entries
        if entry.kind is MethodKind.STATEMENT and entry.proof is not None
    }
    state: dict[str, int] = {}
    path: list[str] = []

    def visit(name: str) -> None:
        state[name] = 1
        path.append(name)
        for dep in proved.get(name, ()):
            if dep not in proved:
                continue
            if state.get(dep) == 1:
                cycle = (*path[path.index(dep) :], dep)
                raise CircularProofError(cycle, flat.span)
            if dep not in state:
                visit(dep)
        path.pop()
        state[name] = 2

    for name in proved:
        if name not in state:
            visit(name)


def dependency_graph(flat: FlatSpecies) -> tuple[tuple[str, tuple[str, ...], tuple[str, ...]], ...]:
    """``(statement, def_deps, decl_deps)`` for every proved statement, in table order."""
    return tuple(
        (entry.name, entry.def_deps, entry.decl_deps)
        for entry in flat.entries
        if entry.kind is MethodKind.STATEMENT and entry.proof is not None
    )


def _concludes_whole(entry: MethodEntry) -> bool:
    return isinstance(entry.proof, ast.Justification) and entry.proof.conclude


def conclude_premises(flat: FlatSpecies) -> dict[str, tuple[str, ...]]:
    """Statements a whole-proof ``conclude`` may use, per statement proved that way.

    A statement sees the statements listed before it in the table, except those
    whose proofs already lead back to it, so the added dependencies never close a cycle.
    """
    edges: dict[str, tuple[str, ...]] = {
        entry.name: entry.decl_deps
        for entry in flat.entries
        if entry.kind is MethodKind.STATEMENT and entry.proof is not None
    }

    def reaches(start: str, target: str) -> bool:
        seen: set[str] = set()
        stack = [start]
        while stack:
            name = stack.pop()
            if name == target:
                return True
            if name not in seen:
                seen.add(name)
                stack.extend(edges.get(name, ()))
        return False

    premises: dict[str, tuple[str, ...]] = {}
    earlier: list[str] = []
    for entry in flat.statements():
        if _concludes_whole(entry):
            usable = tuple(name for name in earlier if not reaches(name, entry.name))
            premises[entry.name] = usable
            edges[entry.name] = usable
        earlier.append(entry.name)
    return premises
