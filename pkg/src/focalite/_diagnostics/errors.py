from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, computed_field


class ErrorCode(StrEnum):
    LEX = "E-LEX"
    SYNTAX = "E-SYNTAX"
    UNTERMINATED = "E-UNTERMINATED"
    DUPLICATE = "E-DUPLICATE"
    UNKNOWN_SPECIES = "E-UNKNOWN-SPECIES"
    ARITY = "E-ARITY"
    INTERFACE = "E-INTERFACE"
    UNSUPPORTED = "E-UNSUPPORTED"
    TYPE_CLASH = "E-TYPECLASH"
    FINAL = "E-FINAL"
    PROOF_TARGET = "E-PROOF-TARGET"
    ALREADY_PROVED = "E-ALREADY-PROVED"
    INHERIT_COLLECTION = "E-INHERIT-COLLECTION"
    TYPE = "E-TYPE"
    UNBOUND = "E-UNBOUND"
    NON_STRUCTURAL = "E-NONSTRUCTURAL"
    UNKNOWN_CITATION = "E-UNKNOWN-CITATION"
    NOT_DEFINED = "E-NOT-DEFINED"
    UNKNOWN_HYPOTHESIS = "E-UNKNOWN-HYPOTHESIS"
    STEP_SCOPE = "E-STEP-SCOPE"
    PROOF_STRUCTURE = "E-PROOF-STRUCTURE"
    NOT_INDUCTIVE = "E-NOT-INDUCTIVE"
    CASE_MISMATCH = "E-CASE-MISMATCH"
    MISSING_CASE = "E-MISSING-CASE"
    OBLIGATION = "E-OBLIGATION"
    BUDGET = "E-BUDGET"
    INVALIDATED = "E-INVALIDATED"
    CIRCULAR = "E-CIRCULAR"
    INCOMPLETE = "E-INCOMPLETE"
    CARRIER = "E-CARRIER"
    MATCH = "E-MATCH"
    FUEL = "E-FUEL"
    RUNTIME_TYPE = "E-RUNTIME-TYPE"
    EVAL_TARGET = "E-EVAL-TARGET"
    IO = "E-IO"
    NON_EXHAUSTIVE = "W-NONEXHAUSTIVE"
    REPROVED = "I-REPROVED"


class Span(BaseModel):
    model_config = ConfigDict(frozen=True)

    file: str = "<input>"
    line: int = Field(default=1, ge=1)
    col: int = Field(default=1, ge=1)

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


class Error(BaseModel):
    model_config = ConfigDict(frozen=True)

    code: ErrorCode
    description: str | None = Field(default=None, exclude=True)
    span: Span | None = None
    step: str | None = None

    @computed_field  # type: ignore[prop-decorator]
    @property
    def message(self) -> str:
        if self.description:
            return self.description
        return self.code.name.replace("_", " ").capitalize()
