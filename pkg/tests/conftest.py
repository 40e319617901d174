import pytest

_VERDICTS: dict[int, str] = {}


@pytest.fixture
def verdict():
    """Record a one-line PASS/FAIL summary for an acceptance criterion."""

    def record(k: int, ok: bool, detail: str) -> bool:
        line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        _VERDICTS[k] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_VERDICTS):
            terminalreporter.write_line(_VERDICTS[k])
