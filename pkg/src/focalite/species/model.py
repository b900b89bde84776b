import dataclasses
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

from focalite._diagnostics.errors import Span
from focalite.syntax import ast


class MethodKind(StrEnum):
    FUNCTION = "function"
    LOGICAL = "logical"
    STATEMENT = "statement"


class MethodStatus(StrEnum):
    DECLARED = "declared"
    DEFINED = "defined"
    PROVED = "proved"


@dataclass(frozen=True, slots=True)
class MethodEntry:
    """One row of a flattened method table.

    Functions and logical definitions carry a ``definition`` once defined;
    statements carry a ``proof`` once proved. ``origin`` names the species that
    contributed the current definition or proof.
    """

    name: str
    kind: MethodKind
    origin: str
    type: ast.TypeExpr | None = None
    definition: ast.LetDef | ast.LogicalLet | None = None
    formula: ast.Formula | None = None
    proof: ast.Proof | None = None
    def_deps: tuple[str, ...] = ()
    decl_deps: tuple[str, ...] = ()
    unfolded: tuple[tuple[str, str], ...] = ()
    is_final: bool = False
    invalidated: bool = False
    reproved: bool = False
    span: Span = field(default_factory=Span, compare=False)

    @property
    def status(self) -> MethodStatus:
        if self.kind is MethodKind.STATEMENT:
            return MethodStatus.PROVED if self.proof is not None else MethodStatus.DECLARED
        return MethodStatus.DEFINED if self.definition is not None else MethodStatus.DECLARED

    @property
    def is_function(self) -> bool:
        return self.kind is not MethodKind.STATEMENT


@dataclass(frozen=True, slots=True)
class SpeciesParameter:
    name: str
    interface: str


@dataclass(frozen=True, slots=True)
class FlatSpecies:
    name: str
    params: tuple[SpeciesParameter, ...]
    carrier: ast.TypeExpr | None
    entries: tuple[MethodEntry, ...]
    parents: tuple[str, ...] = ()
    span: Span = field(default_factory=Span, compare=False)

    def entry(self, name: str) -> MethodEntry | None:
        return next((entry for entry in self.entries if entry.name == name), None)

    def names(self) -> tuple[str, ...]:
        return tuple(entry.name for entry in self.entries)

    def statements(self) -> tuple[MethodEntry, ...]:
        return tuple(entry for entry in self.entries if entry.kind is MethodKind.STATEMENT)

    def param(self, name: str) -> SpeciesParameter | None:
        return next((param for param in self.params if param.name == name), None)

    def with_entries(self, entries: tuple[MethodEntry, ...]) -> "FlatSpecies":
        return dataclasses.replace(self, entries=entries)


def _rename_name(name: str, mapping: dict[str, str]) -> str:
    if "!" in name:
        owner, method = name.split("!", 1)
        return f"{mapping.get(owner, owner)}!{method}"
    return name


def rename_parameters(node: Any, mapping: dict[str, str]) -> Any:  # noqa: ANN401
    """Rewrite parameter and collection names throughout a syntax tree or table."""
    if not mapping:
        return node
    match node:
        case ast.ParamRef(name):
            return ast.ParamRef(mapping.get(name, name))
        case ast.QualifiedCall(collection, method, args, span):
            return ast.QualifiedCall(
                mapping.get(collection, collection),
                method,
                tuple(rename_parameters(arg, mapping) for arg in args),
                span,
            )
        case ast.Citation(kind, names, span):
            return ast.Citation(kind, tuple(_rename_name(n, mapping) for n in names), span)
        case tuple():
            return tuple(rename_parameters(item, mapping) for item in node)
        case str() | int() | bool() | None | Span() | StrEnum():
            return node
    if isinstance(node, MethodEntry):
        return dataclasses.replace(
            node,
            type=rename_parameters(node.type, mapping),
            definition=rename_parameters(node.definition, mapping),
            formula=rename_parameters(node.formula, mapping),
            proof=rename_parameters(node.proof, mapping),
            decl_deps=tuple(_rename_name(name, mapping) for name in node.decl_deps),
        )
    if dataclasses.is_dataclass(node) and not isinstance(node, type):
        changes = {
            item.name: rename_parameters(getattr(node, item.name), mapping)
            for item in dataclasses.fields(node)
            if item.name != "span"
        }
        return dataclasses.replace(node, **changes)
    return node


def instantiate(flat: FlatSpecies, arguments: tuple[str, ...]) -> FlatSpecies:
    """The method table of ``flat`` with its parameters replaced by ``arguments``."""
    mapping = {
        param.name: argument
        for param, argument in zip(flat.params, arguments, strict=True)
        if param.name != argument
    }
    if not mapping:
        return flat
    return dataclasses.replace(
        flat,
        carrier=rename_parameters(flat.carrier, mapping),
        entries=tuple(rename_parameters(entry, mapping) for entry in flat.entries),
        params=tuple(
            SpeciesParameter(mapping.get(param.name, param.name), param.interface)
            for param in flat.params
        ),
    )


@dataclass(frozen=True, slots=True)
class CollectionValue:
    """A completed species whose carrier is hidden from its users."""

    name: str
    species_name: str
    _species: FlatSpecies = field(repr=False)

    def interface(self) -> tuple[tuple[str, MethodKind, ast.TypeExpr | None], ...]:
        return tuple(
            (entry.name, entry.kind, entry.type)
            for entry in self._species.entries
            if entry.kind is not MethodKind.STATEMENT
        )

    def statements(self) -> tuple[tuple[str, ast.Formula | None], ...]:
        return tuple((entry.name, entry.formula) for entry in self._species.statements())

    def entry(self, name: str) -> MethodEntry | None:
        return self._species.entry(name)

    def implementation(self) -> FlatSpecies:
        """The completed method table, for the evaluator and the logic layer only."""
        return self._species


def _pattern_names(pattern: ast.Pattern) -> frozenset[str]:
    match pattern:
        case ast.PCons(head, tail):
            return frozenset(name for name in (head, tail) if name != "_")
        case ast.PVar(name):
            return frozenset((name,))
        case _:
            return frozenset()


def qualify(  # noqa: C901, PLR0911
    node: Any,  # noqa: ANN401
    owner: str,
    methods: frozenset[str],
    bound: frozenset[str] = frozenset(),
) -> Any:  # noqa: ANN401
    """View a statement of ``owner``'s interface from outside: ``m`` becomes ``owner!m``."""
    match node:
        case ast.SelfType():
            return ast.ParamRef(owner)
        case ast.Var(name, span) if name in methods and name not in bound:
            return ast.QualifiedCall(owner, name, (), span)
        case ast.App(callee, args, span) if callee in methods and callee not in bound:
            return ast.QualifiedCall(owner, callee, qualify(args, owner, methods, bound), span)
        case ast.All(names, type_, body, span) | ast.Ex(names, type_, body, span):
            inner = bound | frozenset(names)
            return type(node)(
                names,
                qualify(type_, owner, methods, bound),
                qualify(body, owner, methods, inner),
                span,
            )
        case ast.LocalLet(name, value, body, span):
            return ast.LocalLet(
                name,
                qualify(value, owner, methods, bound),
                qualify(body, owner, methods, bound | {name}),
                span,
            )
        case ast.MatchBranch(pattern, body):
            inner = bound | _pattern_names(pattern)
            return ast.MatchBranch(pattern, qualify(body, owner, methods, inner))
        case tuple():
            return tuple(qualify(item, owner, methods, bound) for item in node)
        case str() | int() | bool() | None | Span() | StrEnum():
            return node
    if dataclasses.is_dataclass(node) and not isinstance(node, type):
        changes = {
            item.name: qualify(getattr(node, item.name), owner, methods, bound)
            for item in dataclasses.fields(node)
            if item.name != "span"
        }
        return dataclasses.replace(node, **changes)
    return node
