import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from g2cert import registry  # noqa: E402

CRITERIA: dict[int, tuple[bool, str]] = {}


def record_criterion(n: int, ok: bool, summary: str) -> None:
    CRITERIA[n] = (bool(ok), summary)
    print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {summary}")


@pytest.fixture(scope="session")
def entries():
    return {e.name: e for e in registry.load_all()}


@pytest.fixture(params=list(registry.NAMES))
def entry(request):
    return registry.load(request.param)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, summary = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {summary}")
