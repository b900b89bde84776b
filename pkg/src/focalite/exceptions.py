from focalite._diagnostics.errors import Error, ErrorCode, Span

_MAX_NAME_LENGTH = 100


def _safe_name(name: str) -> str:
    """Truncate a user-supplied name for safe inclusion in error messages."""
    return name[:_MAX_NAME_LENGTH]


class FocaliteError(Exception):
    def __init__(self, error: Error) -> None:
        self.message = error.message
        self.error = error

    def __str__(self) -> str:
        """Return a string representation of the error."""
        return self.message

    @property
    def code(self) -> ErrorCode:
        return self.error.code

    def located(self, span: Span | None = None, step: str | None = None) -> "FocaliteError":
        """Attach a span or step label when the raising site did not know them."""
        update: dict[str, object] = {}
        if span is not None and self.error.span is None:
            update["span"] = span
        if step is not None and self.error.step is None:
            update["step"] = step
        if update:
            self.error = self.error.model_copy(update=update)
        return self


def _error(
    code: ErrorCode,
    description: str,
    span: Span | None = None,
    step: str | None = None,
) -> Error:
    return Error(code=code, description=description, span=span, step=step)


class SurfaceError(FocaliteError):
    """raise error related to reading source text."""


class IllegalCharacterError(SurfaceError):
    def __init__(self, char: str, span: Span) -> None:
        super().__init__(_error(ErrorCode.LEX, f"Illegal character {char!r}", span))


class UnterminatedCommentError(SurfaceError):
    def __init__(self, span: Span) -> None:
        super().__init__(_error(ErrorCode.UNTERMINATED, "Unterminated comment", span))


class ParseError(SurfaceError):
    def __init__(self, expected: str, found: str, span: Span) -> None:
        self.expected = expected
        self.found = found
        super().__init__(
            _error(ErrorCode.SYNTAX, f"Expected {expected}, found {_safe_name(found)}", span),
        )


class DuplicateMethodError(SurfaceError):
    def __init__(self, name: str, span: Span | None = None) -> None:
        super().__init__(
            _error(ErrorCode.DUPLICATE, f"Method {_safe_name(name)} is declared twice", span),
        )


class DuplicatePhraseError(SurfaceError):
    def __init__(self, name: str, span: Span | None = None) -> None:
        super().__init__(
            _error(ErrorCode.DUPLICATE, f"Phrase {_safe_name(name)} is defined twice", span),
        )


class SpeciesError(FocaliteError):
    """raise error related to species structure and inheritance."""


class UnknownSpeciesError(SpeciesError):
    def __init__(self, name: str, span: Span | None = None) -> None:
        super().__init__(
            _error(ErrorCode.UNKNOWN_SPECIES, f"Unknown species {_safe_name(name)}", span),
        )


class ArityMismatchError(SpeciesError):
    def __init__(self, name: str, expected: int, found: int, span: Span | None = None) -> None:
        super().__init__(
            _error(
                ErrorCode.ARITY,
                f"Species {_safe_name(name)} expects {expected} parameters, got {found}",
                span,
            ),
        )


class InterfaceMismatchError(SpeciesError):
    def __init__(
        self,
        argument: str,
        interface: str,
        missing: tuple[str, ...],
        span: Span | None = None,
    ) -> None:
        self.missing = missing
        super().__init__(
            _error(
                ErrorCode.INTERFACE,
                f"{_safe_name(argument)} does not provide the interface of "
                f"{_safe_name(interface)}: missing {', '.join(missing)}",
                span,
            ),
        )


class UnsupportedError(SpeciesError):
    def __init__(self, feature: str, span: Span | None = None) -> None:
        super().__init__(_error(ErrorCode.UNSUPPORTED, f"Unsupported: {feature}", span))


class TypeClashError(SpeciesError):
    def __init__(self, name: str, detail: str, span: Span | None = None) -> None:
        super().__init__(
            _error(ErrorCode.TYPE_CLASH, f"Method {_safe_name(name)}: {detail}", span),
        )


class FinalViolationError(SpeciesError):
    def __init__(self, name: str, span: Span | None = None) -> None:
        super().__init__(
            _error(
                ErrorCode.FINAL,
                f"Method {_safe_name(name)} is final and cannot be redefined",
                span,
            ),
        )


class ProofTargetError(SpeciesError):
    def __init__(self, name: str, span: Span | None = None) -> None:
        super().__init__(
            _error(ErrorCode.PROOF_TARGET, f"No statement named {_safe_name(name)} to prove", span),
        )


class AlreadyProvedError(SpeciesError):
    def __init__(self, name: str, span: Span | None = None) -> None:
        super().__init__(
            _error(
                ErrorCode.ALREADY_PROVED,
                f"Statement {_safe_name(name)} is already proved",
                span,
            ),
        )


class InheritFromCollectionError(SpeciesError):
    def __init__(self, name: str, span: Span | None = None) -> None:
        super().__init__(
            _error(
                ErrorCode.INHERIT_COLLECTION,
                f"{_safe_name(name)} is a collection and cannot be inherited",
                span,
            ),
        )


class CircularProofError(SpeciesError):
    def __init__(self, names: tuple[str, ...], span: Span | None = None) -> None:
        self.names = names
        super().__init__(
            _error(ErrorCode.CIRCULAR, f"Circular proof dependency: {' -> '.join(names)}", span),
        )


class IncompleteSpeciesError(SpeciesError):
    def __init__(self, name: str, missing: tuple[str, ...], span: Span | None = None) -> None:
        self.missing = missing
        super().__init__(
            _error(
                ErrorCode.INCOMPLETE,
                f"Species {_safe_name(name)} is not complete: {', '.join(missing)}",
                span,
            ),
        )


class CarrierUndefinedError(SpeciesError):
    def __init__(self, name: str, span: Span | None = None) -> None:
        super().__init__(
            _error(ErrorCode.CARRIER, f"Species {_safe_name(name)} has no representation", span),
        )


class TypingError(FocaliteError):
    """raise error related to type checking."""


class TypeCheckError(TypingError):
    def __init__(self, detail: str, span: Span | None = None) -> None:
        super().__init__(_error(ErrorCode.TYPE, detail, span))


class UnboundNameError(TypingError):
    def __init__(self, name: str, span: Span | None = None) -> None:
        super().__init__(_error(ErrorCode.UNBOUND, f"Unbound name {_safe_name(name)}", span))


class NonStructuralRecursionError(TypingError):
    def __init__(self, name: str, span: Span | None = None) -> None:
        super().__init__(
            _error(
                ErrorCode.NON_STRUCTURAL,
                f"Recursive call of {_safe_name(name)} is not on a strict sub-term",
                span,
            ),
        )


class ProofError(FocaliteError):
    """raise error related to proof structure and citations."""


class UnknownCitationError(ProofError):
    def __init__(self, name: str, span: Span | None = None, step: str | None = None) -> None:
        super().__init__(
            _error(ErrorCode.UNKNOWN_CITATION, f"Unknown citation {_safe_name(name)}", span, step),
        )


class NotDefinedError(ProofError):
    def __init__(self, name: str, span: Span | None = None, step: str | None = None) -> None:
        super().__init__(
            _error(
                ErrorCode.NOT_DEFINED,
                f"Method {_safe_name(name)} has no definition to unfold",
                span,
                step,
            ),
        )


class UnknownHypothesisError(ProofError):
    def __init__(self, name: str, span: Span | None = None, step: str | None = None) -> None:
        super().__init__(
            _error(
                ErrorCode.UNKNOWN_HYPOTHESIS,
                f"Hypothesis {_safe_name(name)} is not in scope",
                span,
                step,
            ),
        )


class StepOutOfScopeError(ProofError):
    def __init__(self, label: str, span: Span | None = None, step: str | None = None) -> None:
        super().__init__(
            _error(
                ErrorCode.STEP_SCOPE,
                f"Step {_safe_name(label)} is not visible here",
                span,
                step,
            ),
        )


class ProofStructureError(ProofError):
    def __init__(self, detail: str, span: Span | None = None, step: str | None = None) -> None:
        super().__init__(_error(ErrorCode.PROOF_STRUCTURE, detail, span, step))


class NotInductiveError(ProofError):
    def __init__(self, detail: str, span: Span | None = None, step: str | None = None) -> None:
        super().__init__(_error(ErrorCode.NOT_INDUCTIVE, detail, span, step))


class CaseMismatchError(ProofError):
    def __init__(
        self,
        expected: str,
        found: str,
        span: Span | None = None,
        step: str | None = None,
    ) -> None:
        super().__init__(
            _error(
                ErrorCode.CASE_MISMATCH,
                f"Induction case mismatch: expected {expected}, found {found}",
                span,
                step,
            ),
        )


class MissingCaseError(ProofError):
    def __init__(self, case: str, span: Span | None = None, step: str | None = None) -> None:
        super().__init__(
            _error(ErrorCode.MISSING_CASE, f"Induction is missing the {case} case", span, step),
        )


class RuntimeEvalError(FocaliteError):
    """raise error related to evaluation."""


class MatchFailureError(RuntimeEvalError):
    def __init__(self, value: str) -> None:
        super().__init__(_error(ErrorCode.MATCH, f"No pattern matches {_safe_name(value)}"))


class FuelExhaustedError(RuntimeEvalError):
    def __init__(self, fuel: int) -> None:
        super().__init__(_error(ErrorCode.FUEL, f"Evaluation exceeded {fuel} steps"))


class RuntimeTypeError(RuntimeEvalError):
    def __init__(self, detail: str) -> None:
        super().__init__(_error(ErrorCode.RUNTIME_TYPE, detail))


class EvalTargetError(RuntimeEvalError):
    def __init__(self, detail: str) -> None:
        super().__init__(_error(ErrorCode.EVAL_TARGET, detail))


class TooManyAtomsError(Exception):
    def __init__(self, count: int, limit: int) -> None:
        super().__init__(f"{count} atoms exceed the truth-table limit of {limit}")


class SourceReadError(FocaliteError):
    def __init__(self, path: str, reason: str) -> None:
        super().__init__(_error(ErrorCode.IO, f"Cannot read {_safe_name(path)}: {reason}"))
