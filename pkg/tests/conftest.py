import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from torelli.graphs import enumerate_stable_weighted_graphs  # noqa: E402

_RESULTS: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.fixture(scope="session")
def genus2():
    return enumerate_stable_weighted_graphs(2)


@pytest.fixture(scope="session")
def genus3():
    return enumerate_stable_weighted_graphs(3)


@pytest.fixture
def detail(request):
    """A dict the acceptance tests fill with a short summary line."""
    d = {"text": ""}
    request.node._acceptance_detail = d
    return d


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        n, title = m.args
        d = getattr(item, "_acceptance_detail", {"text": ""})
        prev = _RESULTS.get(n)
        ok = rep.passed and (prev is None or prev[1])
        text = "; ".join(t for t in ((prev[2] if prev else ""), d["text"]) if t)
        _RESULTS[n] = (title, ok, text)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(_RESULTS):
        title, ok, text = _RESULTS[n]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {n:>2}: {title}" + (f" ({text})" if text else ""))
