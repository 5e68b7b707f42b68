import pytest

_VERDICTS: list[tuple[str, str, str]] = []


class Criterion:
    def __init__(self, name):
        self.name = name

    def report(self, passed: bool, detail: str) -> bool:
        verdict = "PASS" if passed else "FAIL"
        _VERDICTS.append((verdict, self.name, detail))
        print(f"\n[{verdict}] {self.name}: {detail}")
        return passed

    def skip(self, detail: str):
        _VERDICTS.append(("SKIP", self.name, detail))
        pytest.skip(detail)


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("acceptance")
    return Criterion(marker.args[0] if marker and marker.args else request.node.name)


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for verdict, name, detail in _VERDICTS:
        terminalreporter.write_line(f"[{verdict}] {name}: {detail}")
