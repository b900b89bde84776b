import asyncio
import json
import sys
from pathlib import Path

import pytest

from focalite.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from tests.fixtures.sources import CORPUS_DIR, FIXTURES

SETOID = [str(CORPUS_DIR / "basic_object.fcl"), str(CORPUS_DIR / "setoid.fcl")]
INT_FILES = [
    *SETOID,
    str(CORPUS_DIR / "finite_parts.fcl"),
    str(CORPUS_DIR / "int_setoid.fcl"),
]
RELATIONS = [*SETOID, str(CORPUS_DIR / "binary_relations.fcl")]


def test_check_corpus(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["check", str(CORPUS_DIR), "--no-times"]) == EXIT_OK
    out, err = capsys.readouterr()
    lines = out.splitlines()
    assert "THEOREM Setoid.same_is_not_different - PROVED 0" in lines
    assert all(line.startswith("THEOREM ") and line.endswith(" PROVED 0") for line in lines)
    assert err == ""


def test_check_empty_file(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["check", str(FIXTURES / "empty.fcl")]) == EXIT_OK
    assert capsys.readouterr().out == ""


def test_check_reports_invalidated_proof(capsys: pytest.CaptureFixture[str]) -> None:
    paths = [*RELATIONS, str(FIXTURES / "redefined_equal.fcl")]
    assert main(["check", *paths, "--no-times"]) == EXIT_FAILURE
    first, err = capsys.readouterr()
    assert "THEOREM Redefined_relations.equal_spec - UNPROVED 0" in first.splitlines()
    assert "E-INVALIDATED" in err
    main(["check", *paths, "--no-times"])
    assert capsys.readouterr().out == first


def test_check_json_diagnostics(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["check", str(FIXTURES / "nonstructural.fcl"), "--json"]) == EXIT_FAILURE
    _, err = capsys.readouterr()
    diagnostics = [json.loads(line) for line in err.splitlines()]
    assert [d["code"] for d in diagnostics] == ["E-NONSTRUCTURAL"]
    assert diagnostics[0]["file"].endswith("nonstructural.fcl")
    assert set(diagnostics[0]) == {"severity", "code", "file", "line", "col", "message", "step"}


@pytest.mark.parametrize(
    ("expression", "expected"),
    [
        ("cardinal(from_list([]))", "0"),
        ("belongs(1, from_list([]))", "false"),
        ("release(from_list([1;2;1]), 1)", "[2]"),
    ],
)
def test_eval(capsys: pytest.CaptureFixture[str], expression: str, expected: str) -> None:
    argv = ["eval", *INT_FILES, "--collection", "IntFiniteParts", expression]
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out == f"{expected}\n"


def test_eval_failure(capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["eval", *INT_FILES, "--collection", "IntFiniteParts", "cardinal(true)"]
    assert main(argv) == EXIT_FAILURE
    out, err = capsys.readouterr()
    assert out == ""
    assert err.startswith("<expression>:")
    assert "E-RUNTIME-TYPE" in err


def test_eval_expression_before_options(capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["eval", *INT_FILES, "cardinal(from_list([4; 4; 5]))", "--collection", "IntFiniteParts"]
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out == "3\n"


def test_eval_needs_an_expression() -> None:
    with pytest.raises(SystemExit) as exit_info:
        main(["eval", SETOID[0], "--collection", "IntSetoid"])
    assert exit_info.value.code == EXIT_USAGE


def test_deps(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["deps", *RELATIONS]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    start = lines.index("species Binary_relations")
    edges = lines[start + 1 :]
    assert "equal_spec -> def:equal" in edges
    assert "equal_reflexive -> decl:equal_spec" in edges
    assert lines[:start] == ["species Setoid", "same_is_not_different -> def:different"]


def test_fmt_check(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    messy = tmp_path / "messy.fcl"
    messy.write_text("species   Messy =\n  end;;", encoding="utf-8")
    assert main(["fmt", "--check", str(messy)]) == EXIT_FAILURE
    assert "not in canonical form" in capsys.readouterr().err
    assert main(["fmt", str(messy)]) == EXIT_OK
    canonical = tmp_path / "canonical.fcl"
    canonical.write_text(capsys.readouterr().out, encoding="utf-8")
    assert main(["fmt", "--check", str(canonical)]) == EXIT_OK


def test_missing_file_is_a_usage_error(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["check", str(FIXTURES / "missing.fcl")]) == EXIT_USAGE
    assert "E-IO" in capsys.readouterr().err


def test_invalid_budget_is_a_usage_error(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["check", *SETOID, "--gamma-depth", "0"]) == EXIT_USAGE
    details = json.loads(capsys.readouterr().err)
    assert details[0]["field"] == "gamma_depth"


def test_unknown_command_exits_with_usage() -> None:
    with pytest.raises(SystemExit) as exit_info:
        main(["prove"])
    assert exit_info.value.code == EXIT_USAGE


@pytest.mark.asyncio
async def test_module_entry_point() -> None:
    process = await asyncio.create_subprocess_exec(
        sys.executable,
        "-m",
        "focalite",
        "check",
        "--no-times",
        *SETOID,
        stdout=asyncio.subprocess.PIPE,
        stderr=asyncio.subprocess.PIPE,
    )
    stdout_data, stderr_data = await process.communicate()
    assert process.returncode == EXIT_OK
    assert not stderr_data
    assert stdout_data == b"THEOREM Setoid.same_is_not_different - PROVED 0\n"
