from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from commtensor.mtcli.build import Environment  # noqa: E402
from commtensor.mtcli.commands import load  # noqa: E402

settings.register_profile("ci", max_examples=60, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def verdict():
    """Record and print one pass/fail line for an acceptance criterion."""
    def report(number: int, title: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return report


_ENVS: dict = {}


def corpus_env(name: str) -> Environment:
    if name not in _ENVS:
        doc, _, _ = load(name)
        _ENVS[name] = Environment(doc)
    return _ENVS[name]


@pytest.fixture(scope="session")
def categories():
    env = corpus_env("categories.spec")
    return {d.name: env.category(d.name) for d in env.doc.of_kind("cat")}


@pytest.fixture(scope="session")
def profs():
    return corpus_env("profunctors.spec")


@pytest.fixture(scope="session")
def operadic():
    return corpus_env("operadic.spec")
