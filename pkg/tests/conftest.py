import pytest

_VERDICTS: dict[int, tuple[str, bool, str]] = {}


class Verdicts:
    """Collects one pass/fail line per acceptance criterion for the terminal summary."""

    def record(self, number: int, title: str, passed: bool, detail: str = "") -> bool:
        prev = _VERDICTS.get(number)
        if prev is not None:
            passed = passed and prev[1]
            detail = f"{prev[2]}; {detail}" if detail else prev[2]
        _VERDICTS[number] = (title, bool(passed), detail)
        return bool(passed)


@pytest.fixture(scope="session")
def verdicts():
    return Verdicts()


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        title, passed, detail = _VERDICTS[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {title} | {detail}")
