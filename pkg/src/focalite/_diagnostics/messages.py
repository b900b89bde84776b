from enum import StrEnum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from focalite._diagnostics.errors import Error, ErrorCode

ObligationStatus = Literal["PROVED", "FAILED", "BUDGET", "UNPROVED"]


class Severity(StrEnum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


_SEVERITIES = {"W-": Severity.WARNING, "I-": Severity.INFO}


class Diagnostic(BaseModel):
    """One machine-readable diagnostic, printed as a JSON line on standard error."""

    model_config = ConfigDict(frozen=True)

    severity: Severity
    code: ErrorCode
    file: str
    line: int
    col: int
    message: str
    step: str | None = None

    @classmethod
    def from_error(cls, error: Error, *, file: str = "<input>") -> "Diagnostic":
        span = error.span
        severity = _SEVERITIES.get(error.code.value[:2], Severity.ERROR)
        return cls(
            severity=severity,
            code=error.code,
            file=span.file if span else file,
            line=span.line if span else 1,
            col=span.col if span else 1,
            message=error.message,
            step=error.step,
        )

    def render(self) -> str:
        return self.model_dump_json()

    def render_text(self) -> str:
        """``file:line:col: severity CODE: message [step]``."""
        suffix = f" [{self.step}]" if self.step else ""
        return (
            f"{self.file}:{self.line}:{self.col}: {self.severity} {self.code}: "
            f"{self.message}{suffix}"
        )


class ObligationLine(BaseModel):
    """A report line: ``THEOREM <species>.<name> <step> <status> <millis>``."""

    model_config = ConfigDict(frozen=True)

    species: str
    statement: str
    step: str
    status: ObligationStatus
    millis: int = Field(default=0, ge=0)
    detail: str | None = None

    def render(self, *, timings: bool = True) -> str:
        millis = self.millis if timings else 0
        return f"THEOREM {self.species}.{self.statement} {self.step} {self.status} {millis}"


def sanitize_validation_errors(error: ValidationError) -> tuple[dict[str, str], ...]:
    """Keep field locations and messages only; raw input and pydantic URLs are dropped."""
    return tuple(
        {"field": ".".join(str(loc) for loc in err["loc"]), "message": err["msg"]}
        for err in error.errors()
    )
