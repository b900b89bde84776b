import dataclasses
import logging
from dataclasses import dataclass, field

from focalite._diagnostics.errors import Span
from focalite.exceptions import (
    AlreadyProvedError,
    ArityMismatchError,
    FinalViolationError,
    InheritFromCollectionError,
    InterfaceMismatchError,
    ProofTargetError,
    TypeClashError,
    UnknownSpeciesError,
    UnsupportedError,
)
from focalite.species.dependencies import analyze_dependencies, check_circularity
from focalite.species.model import (
    CollectionValue,
    FlatSpecies,
    MethodEntry,
    MethodKind,
    MethodStatus,
    SpeciesParameter,
    instantiate,
)
from focalite.species.types import replace_self
from focalite.syntax import ast
from focalite.syntax.printer import format_type

LOGGER = logging.getLogger(__name__)


@dataclass
class SpeciesEnv:
    """Species and collections known so far, in declaration order."""

    species: dict[str, FlatSpecies] = field(default_factory=dict)
    collections: dict[str, CollectionValue] = field(default_factory=dict)

    def interface_entries(
        self,
        owner: str,
        params: tuple[SpeciesParameter, ...],
    ) -> tuple[MethodEntry, ...] | None:
        """Entries visible through ``owner!``: a parameter's interface or a collection."""
        param = next((p for p in params if p.name == owner), None)
        if param is not None:
            interface = self.species.get(param.interface)
            return interface.entries if interface is not None else None
        collection = self.collections.get(owner)
        if collection is not None:
            return collection.implementation().entries
        return None


def _entries_agree(required: MethodEntry, provided: MethodEntry, argument: str) -> bool:
    if required.kind is not provided.kind:
        return False
    if required.kind is MethodKind.STATEMENT:
        return True
    if required.type is None or provided.type is None:
        return True
    carrier = ast.ParamRef(argument)
    return replace_self(required.type, carrier) == replace_self(provided.type, carrier)


def check_interface(
    argument: str,
    interface: str,
    env: SpeciesEnv,
    params: tuple[SpeciesParameter, ...],
    span: Span | None = None,
) -> None:
    provided = env.interface_entries(argument, params)
    if provided is None:
        raise UnknownSpeciesError(argument, span)
    required = env.species[interface].entries
    by_name = {entry.name: entry for entry in provided}
    missing = tuple(
        entry.name
        for entry in required
        if entry.name not in by_name or not _entries_agree(entry, by_name[entry.name], argument)
    )
    if missing:
        raise InterfaceMismatchError(argument, interface, missing, span)


class _Flattener:
    def __init__(self, decl: ast.SpeciesDecl, env: SpeciesEnv) -> None:
        self.decl = decl
        self.env = env
        self.table: dict[str, MethodEntry] = {}
        self.carrier: ast.TypeExpr | None = None
        self.params = self._params()

    def _params(self) -> tuple[SpeciesParameter, ...]:
        params: list[SpeciesParameter] = []
        for param in self.decl.params:
            interface = param.interface
            if interface.name in self.env.collections:
                raise UnsupportedError(
                    f"collection {interface.name} used as a parameter interface",
                    interface.span,
                )
            flat = self.env.species.get(interface.name)
            if flat is None:
                raise UnknownSpeciesError(interface.name, interface.span)
            if interface.args or flat.params:
                raise UnsupportedError("parameterized parameter interfaces", interface.span)
            params.append(SpeciesParameter(param.name, interface.name))
        return tuple(params)

    def run(self) -> FlatSpecies:
        for parent in self.decl.inherits:
            self._inherit(parent)
        self._revalidate()
        for method in self.decl.methods:
            self._apply(method)
        self._revalidate()
        flat = FlatSpecies(
            name=self.decl.name,
            params=self.params,
            carrier=self.carrier,
            entries=tuple(self.table.values()),
            parents=tuple(parent.name for parent in self.decl.inherits),
            span=self.decl.span,
        )
        check_circularity(flat)
        LOGGER.debug(
            "Flattened %s",
            flat.name,
            extra={"extra": {"methods": len(flat.entries)}},
        )
        return flat

    # Inheritance

    def _inherit(self, parent: ast.SpeciesExpr) -> None:
        if parent.name in self.env.collections:
            raise InheritFromCollectionError(parent.name, parent.span)
        flat = self.env.species.get(parent.name)
        if flat is None:
            raise UnknownSpeciesError(parent.name, parent.span)
        if len(parent.args) != len(flat.params):
            raise ArityMismatchError(parent.name, len(flat.params), len(parent.args), parent.span)
        for argument, param in zip(parent.args, flat.params, strict=True):
            check_interface(argument, param.interface, self.env, self.params, parent.span)
        inherited = instantiate(flat, parent.args)
        if inherited.carrier is not None:
            self._set_carrier(inherited.carrier, parent.span)
        for entry in inherited.entries:
            self._merge(entry, parent.span)

    def _set_carrier(self, carrier: ast.TypeExpr, span: Span) -> None:
        if self.carrier is not None and self.carrier != carrier:
            raise TypeClashError(
                "representation",
                f"{format_type(carrier)} conflicts with {format_type(self.carrier)}",
                span,
            )
        self.carrier = carrier

    def _merge(self, entry: MethodEntry, span: Span) -> None:
        existing = self.table.get(entry.name)
        if existing is None:
            self.table[entry.name] = entry
            return
        self._check_compatible(existing, entry.kind, entry.type, entry.formula, span)
        winner = entry
        if entry.status is MethodStatus.DECLARED and existing.status is not MethodStatus.DECLARED:
            winner = existing
        self.table[entry.name] = dataclasses.replace(
            winner,
            type=winner.type if winner.type is not None else existing.type,
            is_final=existing.is_final or entry.is_final,
        )

    def _check_compatible(
        self,
        existing: MethodEntry,
        kind: MethodKind,
        type_: ast.TypeExpr | None,
        formula: ast.Formula | None,
        span: Span,
    ) -> None:
        name = existing.name
        if existing.kind is not kind:
            raise TypeClashError(name, f"{kind} conflicts with inherited {existing.kind}", span)
        if type_ is not None and existing.type is not None and type_ != existing.type:
            raise TypeClashError(
                name,
                f"type {format_type(type_)} conflicts with {format_type(existing.type)}",
                span,
            )
        if formula is not None and existing.formula is not None and formula != existing.formula:
            raise TypeClashError(name, "statement differs from the inherited one", span)

    # Body

    def _apply(self, method: ast.Method) -> None:
        match method:
            case ast.Signature(name, type_, span):
                self._declare(name, type_, span)
            case ast.Representation(type_, span):
                self._set_carrier(type_, span)
            case ast.LetDef() | ast.LogicalLet():
                self._define(method)
            case ast.Property(name, formula, span):
                self._state(name, formula, span)
            case ast.Theorem(name, formula, proof, span):
                self._state(name, formula, span)
                self._attach_proof(name, proof, span)
            case ast.ProofOf(name, proof, span):
                existing = self.table.get(name)
                if existing is None or existing.kind is not MethodKind.STATEMENT:
                    raise ProofTargetError(name, span)
                self._attach_proof(name, proof, span)

    def _declare(self, name: str, type_: ast.TypeExpr, span: Span) -> None:
        existing = self.table.get(name)
        if existing is None:
            self.table[name] = MethodEntry(
                name, MethodKind.FUNCTION, self.decl.name, type=type_, span=span
            )
            return
        self._check_compatible(existing, MethodKind.FUNCTION, type_, None, span)
        self.table[name] = dataclasses.replace(existing, type=type_)

    def _define(self, method: ast.LetDef | ast.LogicalLet) -> None:
        kind = MethodKind.FUNCTION if isinstance(method, ast.LetDef) else MethodKind.LOGICAL
        existing = self.table.get(method.name)
        if existing is None:
            self.table[method.name] = MethodEntry(
                method.name,
                kind,
                self.decl.name,
                definition=method,
                is_final=method.is_final,
                span=method.span,
            )
            return
        self._check_compatible(existing, kind, None, None, method.span)
        if existing.is_final and existing.definition is not None:
            raise FinalViolationError(method.name, method.span)
        if existing.definition is not None:
            self._invalidate_dependents(method.name)
        self.table[method.name] = dataclasses.replace(
            existing,
            origin=self.decl.name,
            definition=method,
            is_final=existing.is_final or method.is_final,
            span=method.span,
        )

    def _invalidate_dependents(self, name: str) -> None:
        for entry in tuple(self.table.values()):
            inherited = entry.origin != self.decl.name
            if entry.proof is not None and name in entry.def_deps and inherited:
                LOGGER.info("Redefinition of %s invalidates %s", name, entry.name)
                self.table[entry.name] = _invalidated(entry)

    def _state(self, name: str, formula: ast.Formula, span: Span) -> None:
        existing = self.table.get(name)
        if existing is None:
            self.table[name] = MethodEntry(
                name, MethodKind.STATEMENT, self.decl.name, formula=formula, span=span
            )
            return
        self._check_compatible(existing, MethodKind.STATEMENT, None, formula, span)

    def _attach_proof(self, name: str, proof: ast.Proof, span: Span) -> None:
        existing = self.table[name]
        if existing.proof is not None:
            raise AlreadyProvedError(name, span)
        deps = analyze_dependencies(proof)
        self.table[name] = dataclasses.replace(
            existing,
            origin=self.decl.name,
            proof=proof,
            def_deps=deps.def_deps,
            decl_deps=deps.decl_deps,
            invalidated=False,
            reproved=existing.invalidated,
            span=span,
        )

    def _revalidate(self) -> None:
        """Record the definitions each proof unfolds; drop proofs whose definitions changed."""
        for entry in tuple(self.table.values()):
            if entry.proof is None:
                continue
            current = tuple(
                (name, self.table[name].origin)
                for name in entry.def_deps
                if name in self.table and self.table[name].definition is not None
            )
            if entry.origin == self.decl.name:
                self.table[entry.name] = dataclasses.replace(entry, unfolded=current)
            elif current != entry.unfolded:
                LOGGER.info("Inherited proof of %s no longer matches its definitions", entry.name)
                self.table[entry.name] = _invalidated(entry)


def _invalidated(entry: MethodEntry) -> MethodEntry:
    return dataclasses.replace(
        entry,
        proof=None,
        def_deps=(),
        decl_deps=(),
        unfolded=(),
        invalidated=True,
    )


def flatten(decl: ast.SpeciesDecl, env: SpeciesEnv) -> FlatSpecies:
    """Resolve inheritance into a single method table."""
    return _Flattener(decl, env).run()
