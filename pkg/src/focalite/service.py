"""JSON-over-HTTP access to ``check``, ``deps``, ``fmt`` and ``eval``.

Every request carries its own sources; nothing is kept between requests.
"""

import json
import logging
from collections.abc import Callable
from http import HTTPStatus

import uvicorn
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from starlette.applications import Starlette
from starlette.concurrency import run_in_threadpool
from starlette.requests import Request
from starlette.routing import Mount
from starlette.types import Receive, Scope, Send

from focalite._diagnostics.messages import Diagnostic, sanitize_validation_errors
from focalite.evaluator.budget import EvalBudget
from focalite.evaluator.values import format_value
from focalite.exceptions import FocaliteError
from focalite.proofs.report import CheckReport
from focalite.prover.budget import SearchBudget
from focalite.session import (
    CheckOptions,
    SourceFile,
    check_sources,
    dependency_edges,
    evaluate_expression,
    format_source,
    load,
)

LOGGER = logging.getLogger(__name__)
MAXIMUM_MESSAGE_SIZE = 4 * 1024 * 1024  # 4MB
_SECURITY_HEADERS: list[tuple[bytes, bytes]] = [
    (b"x-content-type-options", b"nosniff"),
    (b"cache-control", b"no-store"),
]


class SourcesRequest(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    sources: tuple[SourceFile, ...] = Field(description="Files in the order they are loaded")


class CheckRequest(SourcesRequest):
    budget: SearchBudget | None = Field(
        default=None,
        description="Overrides the server's search budget for this request",
    )


class EvalRequest(SourcesRequest):
    collection: str
    expression: str
    budget: EvalBudget = Field(default_factory=EvalBudget)


class DepsResponse(BaseModel):
    ok: bool
    edges: dict[str, tuple[str, ...]] = Field(description="Dependency lines keyed by species")
    diagnostics: tuple[Diagnostic, ...] = ()


class FmtResponse(BaseModel):
    ok: bool
    sources: tuple[SourceFile, ...]
    diagnostics: tuple[Diagnostic, ...] = ()


class EvalResponse(BaseModel):
    ok: bool
    value: str | None = None
    diagnostics: tuple[Diagnostic, ...] = ()


class ErrorResponse(BaseModel):
    error: str
    details: tuple[dict[str, str], ...] | None = None


class ErrorResponseInfo(BaseModel):
    http_status_code: HTTPStatus
    message: str
    details: tuple[dict[str, str], ...] | None = None


type Handler = Callable[[object], BaseModel]


class CheckingService:
    def __init__(self, options: CheckOptions | None = None) -> None:
        self._options = options or CheckOptions(timings=False)
        self._handlers: dict[str, Handler] = {
            "check": self._check,
            "deps": self._deps,
            "fmt": self._fmt,
            "eval": self._eval,
        }

    @property
    def operations(self) -> tuple[str, ...]:
        return tuple(self._handlers)

    async def app(self, scope: Scope, receive: Receive, send: Send) -> None:
        request = Request(scope, receive)
        operation = request.url.path.rstrip("/").rsplit("/", 1)[-1]
        handler = self._handlers.get(operation)
        if handler is None:
            await self._send_error_response(
                send,
                ErrorResponseInfo(
                    http_status_code=HTTPStatus.NOT_FOUND,
                    message=f"Unknown operation; expected one of {', '.join(self.operations)}",
                ),
            )
            return
        if request.method != "POST":
            await self._handle_unsupported_request(send)
            return
        content_type = request.headers.get("content-type")
        if not content_type or content_type.split(";")[0].strip().lower() != "application/json":
            LOGGER.error("Unsupported Media Type: %s", content_type)
            await self._send_error_response(
                send,
                ErrorResponseInfo(
                    http_status_code=HTTPStatus.UNSUPPORTED_MEDIA_TYPE,
                    message="Unsupported Media Type: Content-Type must be application/json",
                ),
            )
            return
        await self._handle_post_request(request, handler, send)

    async def _handle_post_request(self, request: Request, handler: Handler, send: Send) -> None:
        body = await request.body()
        if len(body) > MAXIMUM_MESSAGE_SIZE:
            LOGGER.error("Request body too large")
            await self._send_error_response(
                send,
                ErrorResponseInfo(
                    http_status_code=HTTPStatus.REQUEST_ENTITY_TOO_LARGE,
                    message="Request body too large.",
                ),
            )
            return

        try:
            raw_message = json.loads(body)
        except (json.JSONDecodeError, UnicodeDecodeError):
            await self._send_error_response(
                send,
                ErrorResponseInfo(
                    http_status_code=HTTPStatus.BAD_REQUEST,
                    message="Parse error: Invalid body",
                ),
            )
            return

        try:
            response = await run_in_threadpool(handler, raw_message)
        except ValidationError as error:
            LOGGER.info("Rejected request", extra={"extra": {"errors": error.error_count()}})
            await self._send_error_response(
                send,
                ErrorResponseInfo(
                    http_status_code=HTTPStatus.UNPROCESSABLE_ENTITY,
                    message="Error validating request",
                    details=sanitize_validation_errors(error),
                ),
            )
            return
        except Exception:
            LOGGER.exception("Unexpected error processing request")
            await self._send_error_response(
                send,
                ErrorResponseInfo(
                    http_status_code=HTTPStatus.INTERNAL_SERVER_ERROR,
                    message="Internal server error",
                ),
            )
            return

        await self._send_json(send, HTTPStatus.OK, response)

    def _check(self, raw: object) -> CheckReport:
        request = CheckRequest.model_validate(raw)
        options = self._options
        if request.budget is not None:
            options = options.model_copy(update={"budget": request.budget})
        return check_sources(request.sources, options)

    def _deps(self, raw: object) -> DepsResponse:
        request = SourcesRequest.model_validate(raw)
        workspace = load(request.sources)
        return DepsResponse(
            ok=workspace.ok,
            edges=dict(dependency_edges(workspace)),
            diagnostics=workspace.diagnostics,
        )

    def _fmt(self, raw: object) -> FmtResponse:
        request = SourcesRequest.model_validate(raw)
        formatted: list[SourceFile] = []
        diagnostics: list[Diagnostic] = []
        for source in request.sources:
            try:
                formatted.append(SourceFile(name=source.name, text=format_source(source)))
            except FocaliteError as error:
                diagnostics.append(Diagnostic.from_error(error.error, file=source.name))
        return FmtResponse(
            ok=not diagnostics,
            sources=tuple(formatted),
            diagnostics=tuple(diagnostics),
        )

    def _eval(self, raw: object) -> EvalResponse:
        request = EvalRequest.model_validate(raw)
        workspace = load(request.sources)
        if not workspace.ok:
            return EvalResponse(ok=False, diagnostics=workspace.diagnostics)
        try:
            value = evaluate_expression(
                workspace,
                request.collection,
                request.expression,
                request.budget,
            )
        except FocaliteError as error:
            diagnostic = Diagnostic.from_error(error.error, file="<expression>")
            return EvalResponse(ok=False, diagnostics=(*workspace.diagnostics, diagnostic))
        return EvalResponse(
            ok=True,
            value=format_value(value),
            diagnostics=workspace.diagnostics,
        )

    async def _send_json(self, send: Send, status: HTTPStatus, payload: BaseModel) -> None:
        await send(
            {
                "type": "http.response.start",
                "status": status.value,
                "headers": [
                    (b"content-type", b"application/json"),
                    *_SECURITY_HEADERS,
                ],
            },
        )
        await send(
            {
                "type": "http.response.body",
                "body": payload.model_dump_json(exclude_none=True).encode("utf-8"),
                "more_body": False,
            },
        )

    async def _handle_unsupported_request(self, send: Send) -> None:
        await send(
            {
                "type": "http.response.start",
                "status": HTTPStatus.METHOD_NOT_ALLOWED.value,
                "headers": [
                    (b"allow", b"POST"),
                    (b"content-type", b"text/plain"),
                    *_SECURITY_HEADERS,
                ],
            },
        )
        await send(
            {
                "type": "http.response.body",
                "body": b"Method Not Allowed",
                "more_body": False,
            },
        )

    async def _send_error_response(self, send: Send, error_info: ErrorResponseInfo) -> None:
        body = ErrorResponse(error=error_info.message, details=error_info.details)
        await send(
            {
                "type": "http.response.start",
                "status": error_info.http_status_code.value,
                "headers": [(b"content-type", b"application/json"), *_SECURITY_HEADERS],
            },
        )
        await send(
            {
                "type": "http.response.body",
                "body": body.model_dump_json(exclude_none=True).encode("utf-8"),
                "more_body": False,
            },
        )


def create_app(options: CheckOptions | None = None) -> Starlette:
    service = CheckingService(options)
    return Starlette(routes=[Mount("/", app=service.app)])


def serve(host: str, port: int, options: CheckOptions | None = None) -> None:
    LOGGER.info("Serving on %s:%d", host, port)
    uvicorn.run(create_app(options), host=host, port=port)
