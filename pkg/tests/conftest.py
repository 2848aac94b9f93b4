import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    The test stores its measurement in ``rec["detail"]``; the outcome comes
    from the test result itself.
    """
    rec = {"detail": ""}
    yield rec
    call = getattr(request.node, "rep_call", None)
    status = "PASS" if call is not None and call.passed else "FAIL"
    ACCEPTANCE_LINES.append(f"{status}  {request.node.name}: {rec['detail']}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
