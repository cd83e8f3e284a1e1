import pytest

from dsqsat.formula import Formula

EXAMPLE1 = [
    [-1, -3],
    [-2, 3],
    [1, 2, 3],
    [2, -3],
    [-1, 4, 5],
    [4, -5],
    [-4, 5],
    [-1, -4, -5],
]

# four-clause formula used to illustrate D-sequents
DSEQ_EXAMPLE = [[1, 2], [-1, -2], [-1, 3], [2, -3]]


@pytest.fixture
def example1() -> Formula:
    return Formula.from_lists(EXAMPLE1, 5)


# one line per acceptance criterion, printed after the run
_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def record_criterion(num: int, name: str, passed: bool, detail: str = "") -> None:
    _ACCEPTANCE[num] = (name, passed, detail)


@pytest.fixture
def criterion():
    return record_criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        name, passed, detail = _ACCEPTANCE[num]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {num} [{status}] {name}: {detail}")
