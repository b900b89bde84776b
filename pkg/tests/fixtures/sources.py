from functools import cache
from pathlib import Path

from focalite.corpus import corpus_text, load_manifest
from focalite.proofs.report import CheckReport
from focalite.session import CheckOptions, SourceFile, Workspace, check_sources, load

FIXTURES = Path(__file__).parent
CORPUS_DIR = Path(__file__).parents[2] / "src" / "focalite" / "corpus"

SETOID_FILES = ("basic_object.fcl", "setoid.fcl")
RELATION_FILES = (*SETOID_FILES, "binary_relations.fcl")
FINITE_PARTS_FILES = (*SETOID_FILES, "finite_parts.fcl")
INT_FILES = (*FINITE_PARTS_FILES, "int_setoid.fcl")

NO_TIMES = CheckOptions(timings=False)


def corpus_source(file: str) -> SourceFile:
    return SourceFile(name=file, text=corpus_text(file))


def corpus_sources(*files: str) -> tuple[SourceFile, ...]:
    """The named corpus files, or all of them in manifest order."""
    return tuple(corpus_source(file) for file in files or load_manifest().files)


def fixture_source(file: str) -> SourceFile:
    return SourceFile(name=file, text=(FIXTURES / file).read_text(encoding="utf-8"))


def source(text: str, name: str = "test.fcl") -> SourceFile:
    return SourceFile(name=name, text=text)


def mutated(file: str, old: str, new: str) -> SourceFile:
    text = corpus_text(file)
    if old not in text:
        msg = f"{old!r} not found in {file}"
        raise ValueError(msg)
    return SourceFile(name=file, text=text.replace(old, new, 1))


@cache
def corpus_workspace() -> Workspace:
    return load(corpus_sources())


@cache
def int_workspace() -> Workspace:
    return load(corpus_sources(*INT_FILES))


@cache
def corpus_report() -> CheckReport:
    return check_sources(corpus_sources(), NO_TIMES)
