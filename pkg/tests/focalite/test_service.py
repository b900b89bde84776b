from http import HTTPStatus

import pytest
from starlette.testclient import TestClient

from focalite.service import MAXIMUM_MESSAGE_SIZE, create_app
from tests.fixtures.sources import INT_FILES, SETOID_FILES, corpus_sources, source


def payload(*files: str, extra: str | None = None) -> list[dict[str, str]]:
    sources = [s.model_dump() for s in corpus_sources(*files)]
    if extra is not None:
        sources.append(source(extra).model_dump())
    return sources


@pytest.fixture
def client() -> TestClient:
    return TestClient(create_app())


def test_check_returns_report(client: TestClient) -> None:
    response = client.post("/check", json={"sources": payload(*SETOID_FILES)})
    assert response.status_code == HTTPStatus.OK
    assert response.headers["x-content-type-options"] == "nosniff"
    body = response.json()
    assert body["ok"] is True
    lines = [line for s in body["statements"] for line in s["lines"]]
    assert {line["statement"] for line in lines} == {"same_is_not_different"}
    assert all(line["millis"] == 0 for line in lines)


def test_check_accepts_budget_override(client: TestClient) -> None:
    wrong = (
        "species Wrong = inherit Setoid;\n"
        "  theorem bad : all x y : Self, equal(x, y) proof = by property equal_reflexive;\n"
        "end;;\n"
    )
    response = client.post(
        "/check",
        json={"sources": payload(*SETOID_FILES, extra=wrong), "budget": {"max_branch_nodes": 1}},
    )
    assert response.status_code == HTTPStatus.OK
    body = response.json()
    assert body["ok"] is False
    statuses = {
        s["statement"]: [line["status"] for line in s["lines"]] for s in body["statements"]
    }
    assert statuses["bad"] == ["BUDGET"]


def test_eval(client: TestClient) -> None:
    response = client.post(
        "/eval",
        json={
            "sources": payload(*INT_FILES),
            "collection": "IntFiniteParts",
            "expression": "release(from_list([1; 2; 1]), 1)",
        },
    )
    assert response.status_code == HTTPStatus.OK
    assert response.json() == {"ok": True, "value": "[2]", "diagnostics": []}


def test_eval_reports_runtime_errors(client: TestClient) -> None:
    response = client.post(
        "/eval",
        json={
            "sources": payload(*INT_FILES),
            "collection": "Nowhere",
            "expression": "1",
        },
    )
    assert response.status_code == HTTPStatus.OK
    body = response.json()
    assert body["ok"] is False
    assert [d["code"] for d in body["diagnostics"]] == ["E-EVAL-TARGET"]


def test_deps(client: TestClient) -> None:
    response = client.post("/deps", json={"sources": payload(*SETOID_FILES)})
    assert response.status_code == HTTPStatus.OK
    assert response.json()["edges"] == {"Setoid": ["same_is_not_different -> def:different"]}


def test_fmt(client: TestClient) -> None:
    response = client.post(
        "/fmt",
        json={
            "sources": [
                {"name": "a.fcl", "text": "species   A =\nend;;"},
                {"name": "b.fcl", "text": "species"},
            ],
        },
    )
    assert response.status_code == HTTPStatus.OK
    body = response.json()
    assert body["ok"] is False
    assert [s["name"] for s in body["sources"]] == ["a.fcl"]
    assert [(d["file"], d["code"]) for d in body["diagnostics"]] == [("b.fcl", "E-SYNTAX")]


def test_unknown_operation(client: TestClient) -> None:
    response = client.post("/prove", json={"sources": []})
    assert response.status_code == HTTPStatus.NOT_FOUND
    assert "check" in response.json()["error"]


def test_method_not_allowed(client: TestClient) -> None:
    response = client.get("/check")
    assert response.status_code == HTTPStatus.METHOD_NOT_ALLOWED
    assert response.headers["allow"] == "POST"


def test_unsupported_media_type(client: TestClient) -> None:
    response = client.post("/check", content=b"{}", headers={"content-type": "text/plain"})
    assert response.status_code == HTTPStatus.UNSUPPORTED_MEDIA_TYPE


@pytest.mark.parametrize("body", [b"{not json", b'{"sources": "\xff\xfe"}'])
def test_invalid_json(client: TestClient, body: bytes) -> None:
    response = client.post(
        "/check",
        content=body,
        headers={"content-type": "application/json"},
    )
    assert response.status_code == HTTPStatus.BAD_REQUEST
    assert response.json() == {"error": "Parse error: Invalid body"}


def test_validation_errors_are_sanitized(client: TestClient) -> None:
    response = client.post("/eval", json={"sources": [], "expression": "1", "secret": "x"})
    assert response.status_code == HTTPStatus.UNPROCESSABLE_ENTITY
    body = response.json()
    assert body["error"] == "Error validating request"
    assert {detail["field"] for detail in body["details"]} == {"collection", "secret"}
    assert "x" not in {detail["message"] for detail in body["details"]}


def test_request_too_large(client: TestClient) -> None:
    response = client.post(
        "/check",
        content=b" " * (MAXIMUM_MESSAGE_SIZE + 1),
        headers={"content-type": "application/json"},
    )
    assert response.status_code == HTTPStatus.REQUEST_ENTITY_TOO_LARGE
