import pytest

_ACCEPTANCE: list[tuple[str, bool, str]] = []


class Recorder:
    def __call__(self, label: str, passed: bool, detail: str = ""):
        _ACCEPTANCE.append((label, bool(passed), detail))
        line = f"{'PASS' if passed else 'FAIL'}  {label}  {detail}"
        print(line)
        assert passed, line


@pytest.fixture
def record():
    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in sorted(_ACCEPTANCE, key=lambda row: int(row[0].split()[1].rstrip(":"))):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}  {detail}")
