import pytest

_RESULTS: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title, limit): acceptance criterion with a runtime limit in seconds")


@pytest.fixture
def timing(request):
    """Store the measured runtime of the criterion's core computation."""

    def record(seconds: float) -> None:
        request.node.user_properties.append(("runtime", seconds))

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    num, title, limit = mark.args
    runtime = dict(item.user_properties).get("runtime")
    _RESULTS[num] = (title, rep.passed, runtime, limit)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_RESULTS):
        title, ok, runtime, limit = _RESULTS[num]
        rt = "n/a" if runtime is None else f"{runtime:.4f}s"
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] {num:2d}. {title} (runtime {rt}, limit {limit}s)")
