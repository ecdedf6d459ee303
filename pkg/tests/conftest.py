import pytest

_LINES = []


class Recorder:
    """Collects one PASS/FAIL line per acceptance check."""

    def __init__(self, label):
        self.label = label

    def check(self, ok, detail=""):
        _LINES.append(f"{'PASS' if ok else 'FAIL'}  {self.label}" + (f"  ({detail})" if detail else ""))
        assert ok, f"{self.label}: {detail}"


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    return Recorder(marker.args[0] if marker else request.node.name)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
