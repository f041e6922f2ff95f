import pytest

ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion(capsys):
    """Record and print one PASS/FAIL line for an acceptance criterion."""

    def record(num: int, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {detail}"
        ACCEPTANCE[num] = line
        with capsys.disabled():
            print("\n" + line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for num in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[num])
