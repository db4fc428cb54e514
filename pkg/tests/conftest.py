import pytest

_ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record a named acceptance criterion; printed in the terminal summary."""
    state = {"name": request.node.name}

    def set_name(name):
        state["name"] = name

    yield set_name
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    _ACCEPTANCE.append((state["name"], ok))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")
