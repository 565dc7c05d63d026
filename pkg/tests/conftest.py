import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    def record(number, name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {name}" + (f": {detail}" if detail else "")
        ACCEPTANCE_LINES.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
