import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ontomvn.repository import HttpClient, LocalRepository  # noqa: E402
from ontomvn.stubserver import StubRepositoryServer  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def local(tmp_path) -> LocalRepository:
    return LocalRepository(tmp_path / "repo")


@pytest.fixture
def stub():
    with StubRepositoryServer() as server:
        yield server


@pytest.fixture
def client() -> HttpClient:
    return HttpClient(None, timeout=5)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
