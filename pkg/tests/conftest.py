import pytest

# filled by tests/test_acceptance.py; one (number, title, passed) entry per criterion
ACCEPTANCE_RESULTS: list[tuple[int, str, bool]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, passed in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {num}: {title}")


@pytest.fixture
def record_criterion():
    def record(num: int, title: str, passed: bool) -> None:
        ACCEPTANCE_RESULTS.append((num, title, passed))
        print(f"[{'PASS' if passed else 'FAIL'}] criterion {num}: {title}")

    return record
