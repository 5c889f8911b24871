from pathlib import Path

import pytest

from leakyforce.graph import complete_prism, paw, path, read_corpus

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def corpus():
    return read_corpus((FIXTURES / "connected_le6.g6").read_text())


@pytest.fixture
def prism():
    return complete_prism(3)


@pytest.fixture
def paw_graph():
    return paw()


@pytest.fixture
def p3():
    return path(3)


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line; printed in the terminal summary."""
    lines = request.config.stash.setdefault(ACCEPTANCE, [])

    def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
