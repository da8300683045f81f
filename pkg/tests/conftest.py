import pytest

from paritysolve.game import ParityGame

ACCEPTANCE_LINES = []


@pytest.fixture
def two_position_game():
    # pos0: priority 2, Even, -> 1; pos1: priority 3, Odd, -> 0, named "v"
    return ParityGame([0, 1], [2, 3], [[1], [0]], [None, "v"])


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion."""
    def report(number, title, ok, detail=""):
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
