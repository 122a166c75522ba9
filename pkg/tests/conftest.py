"""Collects per-criterion outcomes of the acceptance module and prints one line each."""

import pytest

_OUTCOMES: dict[int, list[tuple[str, str]]] = {}
_DETAILS: dict[int, list[str]] = {}
_TITLES: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.fixture
def detail(request):
    """Attach a free-text measurement to the criterion of the calling test."""
    marker = request.node.get_closest_marker("criterion")

    def add(text: str) -> None:
        if marker is not None:
            _DETAILS.setdefault(marker.args[0], []).append(text)

    return add


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    _TITLES[n] = title
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        if hasattr(rep, "wasxfail"):
            state = "xfail"
        else:
            state = rep.outcome
        _OUTCOMES.setdefault(n, []).append((item.name, state))


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_OUTCOMES):
        states = _OUTCOMES[n]
        ok = all(s == "passed" for _, s in states)
        line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {_TITLES[n]}"
        bad = [f"{name}={s}" for name, s in states if s != "passed"]
        if bad:
            line += "  [" + ", ".join(bad) + "]"
        terminalreporter.write_line(line)
        for text in _DETAILS.get(n, []):
            terminalreporter.write_line(f"             {text}")
