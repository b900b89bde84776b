"""The bundled development: setoids, relations, functions and finite parts."""

import logging
from importlib import resources

from pydantic import BaseModel, ConfigDict, Field

from focalite._diagnostics.messages import ObligationStatus
from focalite.syntax import ast, parse_unit

LOGGER = logging.getLogger(__name__)

INDEX_FILE = "index.txt"


class CorpusEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    file: str
    phrases: tuple[str, ...]
    theorems: tuple[str, ...] = ()
    verdict: ObligationStatus = Field(
        default="PROVED",
        description="Status every statement checked in this file is expected to get",
    )


class CorpusManifest(BaseModel):
    """Corpus files in dependency order, with what each one is expected to contain."""

    model_config = ConfigDict(frozen=True)

    entries: tuple[CorpusEntry, ...]

    @property
    def files(self) -> tuple[str, ...]:
        return tuple(entry.file for entry in self.entries)


def parse_index(text: str) -> CorpusManifest:
    entries: list[CorpusEntry] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        file, phrases, theorems, *verdict = (part.strip() for part in line.split("|"))
        entry = CorpusEntry.model_validate(
            {
                "file": file,
                "phrases": tuple(phrases.split()),
                "theorems": tuple(theorems.split()),
                **({"verdict": verdict[0]} if verdict else {}),
            },
        )
        entries.append(entry)
    return CorpusManifest(entries=tuple(entries))


def load_manifest() -> CorpusManifest:
    return parse_index(resources.files(__name__).joinpath(INDEX_FILE).read_text("utf-8"))


def corpus_text(file: str) -> str:
    return resources.files(__name__).joinpath(file).read_text("utf-8")


def load_corpus() -> tuple[ast.Unit, ...]:
    """Parse every corpus file, in manifest order."""
    units = tuple(parse_unit(corpus_text(file), file) for file in load_manifest().files)
    LOGGER.debug("Loaded %s corpus files", len(units))
    return units
