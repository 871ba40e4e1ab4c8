import pytest

from textile2d import load_fixture

# acceptance tests append (number, passed, detail) here; printed at session end
ACCEPTANCE_RESULTS = []


@pytest.fixture(scope="session")
def path3():
    return load_fixture("path3.spec")


@pytest.fixture(scope="session")
def not_lr():
    return load_fixture("not_lr.spec")


@pytest.fixture(scope="session")
def one_vertex():
    return load_fixture("one_vertex.spec")


@pytest.fixture(scope="session")
def rigid():
    return load_fixture("rigid.spec")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
