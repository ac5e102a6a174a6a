"""Shared helpers for the test suite."""

import contextlib
import io
import json

import pytest

from eqdescent.cli import main

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.line(line)


def _extract_payload(text):
    if not text.startswith("{"):
        return None
    depth = 0
    for i, ch in enumerate(text):
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return json.loads(text[: i + 1])
    return None


@pytest.fixture
def cli():
    """Run the command line in-process: cli(*argv) -> (exit_code, stdout, payload)."""

    def runner(*argv):
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            code = main(list(argv))
        text = out.getvalue()
        return code, text, _extract_payload(text)

    return runner
