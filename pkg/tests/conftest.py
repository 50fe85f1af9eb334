import pytest

from commgrid.linalg import FieldSpec

F5 = FieldSpec.prime(5)
F7 = FieldSpec.prime(7)
QQ = FieldSpec.rational()


@pytest.fixture(params=[F5, QQ], ids=["F5", "Q"])
def field(request):
    return request.param


# PASS/FAIL lines from the acceptance suite, echoed at the end of the run.
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
