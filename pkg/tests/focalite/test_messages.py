import json

import pytest
from jsonschema import Draft7Validator
from jsonschema.exceptions import ValidationError as SchemaValidationError
from pydantic import ValidationError

from focalite._diagnostics.errors import Error, ErrorCode, Span
from focalite._diagnostics.messages import (
    Diagnostic,
    ObligationLine,
    Severity,
    sanitize_validation_errors,
)

SPAN = Span(file="setoid.fcl", line=4, col=3)


def test_from_error_uses_span_and_severity() -> None:
    error = Error(code=ErrorCode.NON_EXHAUSTIVE, description="match misses []", span=SPAN)
    diagnostic = Diagnostic.from_error(error)
    assert diagnostic.severity is Severity.WARNING
    assert (diagnostic.file, diagnostic.line, diagnostic.col) == ("setoid.fcl", 4, 3)


def test_info_codes_get_info_severity() -> None:
    error = Error(code=ErrorCode.REPROVED, description="proof given again", span=SPAN)
    assert Diagnostic.from_error(error).severity is Severity.INFO
    assert Diagnostic.from_error(error).render_text().startswith("setoid.fcl:4:3: info I-REPROVED")


def test_from_error_without_span_falls_back_to_file() -> None:
    error = Error(code=ErrorCode.IO, description="Cannot read x.fcl")
    diagnostic = Diagnostic.from_error(error, file="x.fcl")
    assert diagnostic.severity is Severity.ERROR
    assert (diagnostic.file, diagnostic.line, diagnostic.col) == ("x.fcl", 1, 1)


def test_render_text() -> None:
    error = Error(
        code=ErrorCode.OBLIGATION,
        description="Could not prove p",
        span=SPAN,
        step="<2>1",
    )
    assert Diagnostic.from_error(error).render_text() == (
        "setoid.fcl:4:3: error E-OBLIGATION: Could not prove p [<2>1]"
    )


def test_rendered_json_matches_schema() -> None:
    schema = Diagnostic.model_json_schema()
    Draft7Validator.check_schema(schema)
    validator = Draft7Validator(schema)
    error = Error(code=ErrorCode.TYPE, description="int expected", span=SPAN)
    rendered = json.loads(Diagnostic.from_error(error).render())
    validator.validate(rendered)
    assert rendered["code"] == "E-TYPE"
    assert rendered["step"] is None
    with pytest.raises(SchemaValidationError):
        validator.validate({**rendered, "code": "E-NOPE"})


def test_obligation_line_rejects_negative_millis() -> None:
    with pytest.raises(ValidationError) as error:
        ObligationLine(species="S", statement="t", step="-", status="PROVED", millis=-1)
    assert sanitize_validation_errors(error.value) == (
        {"field": "millis", "message": "Input should be greater than or equal to 0"},
    )
