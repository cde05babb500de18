import contextlib

import pytest

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@contextlib.contextmanager
def _record(number: int, title: str):
    note = {"detail": ""}
    try:
        yield note
    except BaseException as exc:
        ACCEPTANCE[number] = (title, False, note["detail"] or str(exc).splitlines()[0][:120])
        raise
    ACCEPTANCE[number] = (title, True, note["detail"])


@pytest.fixture
def criterion():
    """``with criterion(n, title) as note:`` marks acceptance criterion n as PASS or FAIL."""
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        line = f"{'PASS' if ok else 'FAIL'}  {number:2d}. {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
