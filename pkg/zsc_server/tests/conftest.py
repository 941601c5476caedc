"""Fixtures: a loaded app over the bundled embedding table.

The acceptance recorder mirrors the client package's suite so both print
their criterion verdicts the same way.
"""

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from zsc_server.app import Settings, create_app

FIXTURES = Path(__file__).parent / "fixtures"

ACCEPTANCE_LINES = []


def _record_acceptance(number, name, passed):
    line = f"[ACCEPTANCE {number}] {name}: {'PASS' if passed else 'FAIL'}"
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    return passed


@pytest.fixture
def record_acceptance():
    return _record_acceptance


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria (server)")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def settings():
    return Settings(model=str(FIXTURES / "mini_embeddings.txt"),
                    max_labels=16, batch_size=4)


@pytest.fixture(scope="session")
def client(settings):
    app = create_app(settings)
    assert app.state.model.ready.wait(timeout=10), app.state.model.error
    with TestClient(app) as test_client:
        yield test_client


@pytest.fixture(scope="session")
def request_suite():
    return json.loads((FIXTURES / "score_requests.json").read_text(encoding="utf-8"))
