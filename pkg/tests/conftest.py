"""Shared fixtures: one generated corpus bundle and one completed pipeline run.

The bundle + run pair is expensive (about ten seconds), so it is built once
per session and shared by every test that needs real pipeline output. Two
independent copies are run so byte-level determinism can be checked against
fully separate trees.
"""

import shutil
import time
from types import SimpleNamespace

import pytest
from hypothesis import settings

from moraltext import synth
from moraltext.cli import main as cli_main

settings.register_profile("suite", deadline=None, derandomize=True)
settings.load_profile("suite")


# Lines recorded by tests/test_acceptance.py, replayed after the run so the
# per-criterion verdicts are visible without -s.
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
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def bundle_pair(tmp_path_factory):
    """Two identical generated bundles, each fully run; timings included."""
    base = tmp_path_factory.mktemp("bundles")
    a = base / "a"
    b = base / "b"
    t0 = time.perf_counter()
    synth.generate(a)
    generate_seconds = time.perf_counter() - t0
    shutil.copytree(a, b)

    t1 = time.perf_counter()
    rc = cli_main(["run-all", "--config", str(a / "config.toml")])
    runall_seconds = time.perf_counter() - t1
    assert rc == 0, "pipeline run on bundle A failed"
    rc = cli_main(["run-all", "--config", str(b / "config.toml")])
    assert rc == 0, "pipeline run on bundle B failed"

    return SimpleNamespace(a=a, b=b,
                           generate_seconds=generate_seconds,
                           runall_seconds=runall_seconds)


@pytest.fixture(scope="session")
def run_tree(bundle_pair):
    """The first completed bundle: inputs at the root, artifacts under out/."""
    return bundle_pair.a
