from pydantic import BaseModel, ConfigDict, computed_field

from focalite._diagnostics.messages import Diagnostic, ObligationLine


class StatementReport(BaseModel):
    """Outcome of every obligation of one theorem or ``proof of``."""

    model_config = ConfigDict(frozen=True)

    species: str
    statement: str
    lines: tuple[ObligationLine, ...]
    diagnostics: tuple[Diagnostic, ...] = ()

    @computed_field  # type: ignore[prop-decorator]
    @property
    def proved(self) -> bool:
        return bool(self.lines) and all(line.status == "PROVED" for line in self.lines)


class CheckReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    statements: tuple[StatementReport, ...] = ()
    diagnostics: tuple[Diagnostic, ...] = ()

    @computed_field  # type: ignore[prop-decorator]
    @property
    def ok(self) -> bool:
        errors = [d for d in self.all_diagnostics() if d.severity == "error"]
        return not errors and all(statement.proved for statement in self.statements)

    def all_diagnostics(self) -> tuple[Diagnostic, ...]:
        nested = tuple(d for statement in self.statements for d in statement.diagnostics)
        return self.diagnostics + nested

    def render(self, *, timings: bool = True) -> str:
        return "".join(
            f"{line.render(timings=timings)}\n"
            for statement in self.statements
            for line in statement.lines
        )

    def merge(self, other: "CheckReport") -> "CheckReport":
        return CheckReport(
            statements=self.statements + other.statements,
            diagnostics=self.diagnostics + other.diagnostics,
        )
