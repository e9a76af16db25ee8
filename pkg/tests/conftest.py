import numpy as np
import pytest

from cardtext.components import ConnectedComponent

_criteria = []


def make_cc(w, h, x0=0, y0=0, a_cc=None):
    """Rectangular component with features filled and a full pixel mask."""
    return ConnectedComponent(
        blocks=frozenset({(0, 0)}),
        bbox=(x0, y0, x0 + w - 1, y0 + h - 1),
        h_cc=h,
        w_cc=w,
        a_cc=w * h if a_cc is None else a_cc,
        mask=np.ones((h, w), dtype=bool),
    )


@pytest.fixture
def criterion(request):
    """Record a named acceptance criterion; reported in the terminal summary."""

    def _record(name):
        _criteria.append((name, request.node))
        return name

    return _record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item._criterion_passed = rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, node in _criteria:
        ok = getattr(node, "_criterion_passed", False)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")
