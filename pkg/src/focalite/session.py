"""Phase driver shared by the command line and the checking service.

Sources are parsed, then every phrase is flattened, typechecked and, for
collections, frozen in declaration order. Proof checking runs last, species by
species, so that inherited proofs keep the verdict they got where they were
written.
"""

import logging
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from functools import partial
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field

from focalite._diagnostics.errors import Error
from focalite._diagnostics.messages import Diagnostic, ObligationLine, Severity
from focalite.corpus import INDEX_FILE, parse_index
from focalite.evaluator.budget import EvalBudget
from focalite.evaluator.interpreter import Interpreter
from focalite.evaluator.values import Value
from focalite.exceptions import (
    DuplicatePhraseError,
    EvalTargetError,
    FocaliteError,
    IncompleteSpeciesError,
    SourceReadError,
)
from focalite.proofs.checker import Discharger, Obligation, check_species, discharge
from focalite.proofs.report import CheckReport, StatementReport
from focalite.prover.budget import SearchBudget
from focalite.species.collection import collection_species, make_collection
from focalite.species.dependencies import dependency_graph
from focalite.species.flatten import SpeciesEnv, flatten
from focalite.species.model import FlatSpecies
from focalite.species.typecheck import typecheck_species
from focalite.syntax import ast, parse_expr, parse_unit, pretty_print

LOGGER = logging.getLogger(__name__)

SOURCE_SUFFIX = ".fcl"


class SourceFile(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = Field(description="File name used in diagnostics")
    text: str


class CheckOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    budget: SearchBudget = Field(default_factory=SearchBudget)
    jobs: int = Field(default=1, ge=1, description="Worker processes for prover obligations")
    timings: bool = Field(default=True, description="Print elapsed milliseconds per obligation")


@dataclass(frozen=True, slots=True)
class Workspace:
    """Everything that survived the structural phases, in declaration order."""

    env: SpeciesEnv
    species: tuple[FlatSpecies, ...]
    diagnostics: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return all(d.severity is not Severity.ERROR for d in self.diagnostics)


def _diagnostic(error: Error, file: str) -> Diagnostic:
    return Diagnostic.from_error(error, file=file)


def _directory_files(directory: Path) -> list[Path]:
    index = directory / INDEX_FILE
    if index.is_file():
        manifest = parse_index(index.read_text(encoding="utf-8"))
        return [directory / file for file in manifest.files]
    return sorted(directory.glob(f"*{SOURCE_SUFFIX}"))


def read_sources(paths: Sequence[str | Path]) -> tuple[SourceFile, ...]:
    """Read files in command-line order; a directory contributes its index or its sources."""
    files: list[Path] = []
    for raw in paths:
        path = Path(raw)
        files.extend(_directory_files(path) if path.is_dir() else [path])
    sources: list[SourceFile] = []
    for path in files:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as error:
            raise SourceReadError(str(path), error.strerror or str(error)) from error
        except UnicodeDecodeError as error:
            raise SourceReadError(str(path), error.reason) from error
        sources.append(SourceFile(name=str(path), text=text))
    return tuple(sources)


def parse_sources(
    sources: Iterable[SourceFile],
) -> tuple[tuple[ast.Unit, ...], tuple[Diagnostic, ...]]:
    units: list[ast.Unit] = []
    diagnostics: list[Diagnostic] = []
    for source in sources:
        try:
            units.append(parse_unit(source.text, source.name))
        except FocaliteError as error:
            diagnostics.append(_diagnostic(error.error, source.name))
    return tuple(units), tuple(diagnostics)


def build(units: Iterable[ast.Unit]) -> Workspace:
    """Flatten, typecheck and freeze every phrase; a failing phrase is reported and skipped."""
    env = SpeciesEnv()
    species: list[FlatSpecies] = []
    diagnostics: list[Diagnostic] = []
    for unit in units:
        for phrase in unit.phrases:
            try:
                if phrase.name in env.species or phrase.name in env.collections:
                    raise DuplicatePhraseError(phrase.name)
                match phrase:
                    case ast.SpeciesDecl():
                        typed = typecheck_species(flatten(phrase, env), env)
                        env.species[phrase.name] = typed.flat
                        species.append(typed.flat)
                        for warning in typed.warnings:
                            LOGGER.warning("%s: %s", phrase.name, warning.message)
                            diagnostics.append(_diagnostic(warning, unit.file))
                    case ast.CollectionDecl():
                        flat = collection_species(phrase, env)
                        env.collections[phrase.name] = make_collection(phrase.name, flat)
            except FocaliteError as error:
                diagnostics.append(_diagnostic(error.located(phrase.span).error, unit.file))
                continue
            LOGGER.info("Built %s", phrase.name, extra={"extra": {"file": unit.file}})
    return Workspace(env, tuple(species), tuple(diagnostics))


def load(sources: Iterable[SourceFile]) -> Workspace:
    units, parse_errors = parse_sources(sources)
    workspace = build(units)
    return Workspace(workspace.env, workspace.species, parse_errors + workspace.diagnostics)


@contextmanager
def _discharger(options: CheckOptions) -> Iterator[Discharger | None]:
    if options.jobs == 1:
        yield None
        return
    with ProcessPoolExecutor(max_workers=options.jobs) as pool:
        task = partial(discharge, budget=options.budget)

        def run(
            obligations: tuple[Obligation, ...],
        ) -> Iterator[tuple[ObligationLine, Diagnostic | None]]:
            return pool.map(task, obligations)

        yield run


def check_workspace(workspace: Workspace, options: CheckOptions | None = None) -> CheckReport:
    """Check every proof, then confirm that each collection's statements all hold."""
    options = options or CheckOptions()
    statements: list[StatementReport] = []
    diagnostics = list(workspace.diagnostics)
    verdicts: dict[tuple[str, str], bool] = {}
    with _discharger(options) as run:
        for flat in workspace.species:
            try:
                reports = check_species(
                    flat,
                    workspace.env,
                    options.budget,
                    run=run,
                    inherited=verdicts,
                )
            except FocaliteError as error:
                diagnostics.append(_diagnostic(error.located(flat.span).error, flat.span.file))
                continue
            for report in reports:
                verdicts[(report.species, report.statement)] = report.proved
            statements.extend(reports)
    for collection in workspace.env.collections.values():
        unproved = tuple(
            statement
            for (species, statement), proved in verdicts.items()
            if species == collection.species_name and not proved
        )
        if unproved:
            span = collection.implementation().span
            error = IncompleteSpeciesError(collection.species_name, unproved, span)
            diagnostics.append(_diagnostic(error.error, span.file))
    return CheckReport(statements=tuple(statements), diagnostics=tuple(diagnostics))


def check_sources(
    sources: Iterable[SourceFile],
    options: CheckOptions | None = None,
) -> CheckReport:
    return check_workspace(load(sources), options)


def dependency_edges(workspace: Workspace) -> tuple[tuple[str, tuple[str, ...]], ...]:
    """Sorted ``theorem -> def:name`` and ``-> decl:name`` lines of each species' own proofs.

    Species without proofs of their own are left out.
    """
    groups: list[tuple[str, tuple[str, ...]]] = []
    for flat in workspace.species:
        edges: list[str] = []
        for name, def_deps, decl_deps in dependency_graph(flat):
            entry = flat.entry(name)
            if entry is None or entry.origin != flat.name:
                continue
            edges.extend(f"{name} -> def:{dep}" for dep in def_deps)
            edges.extend(f"{name} -> decl:{dep}" for dep in decl_deps)
        if edges:
            groups.append((flat.name, tuple(sorted(edges))))
    return tuple(groups)


def render_dependencies(groups: Iterable[tuple[str, tuple[str, ...]]]) -> str:
    """One ``species Name`` line per species, followed by its edges."""
    lines: list[str] = []
    for species, edges in groups:
        lines.append(f"species {species}")
        lines.extend(edges)
    return "".join(f"{line}\n" for line in lines)


def format_source(source: SourceFile) -> str:
    return pretty_print(parse_unit(source.text, source.name))


def evaluate_expression(
    workspace: Workspace,
    collection: str,
    text: str,
    budget: EvalBudget | None = None,
) -> Value:
    """Evaluate a ground expression as a user of ``collection``."""
    if collection not in workspace.env.collections:
        msg = f"Unknown collection {collection}"
        raise EvalTargetError(msg)
    expr = parse_expr(text, "<expression>")
    return Interpreter(workspace.env.collections, budget).eval_expr(collection, expr)
