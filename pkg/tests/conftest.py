import numpy as np
import pytest

from trendparadox.dataset import Dataset
from trendparadox.synthgen import SessionGenParams, gen_sessions


@pytest.fixture(scope="session")
def sessions():
    return gen_sessions(SessionGenParams(seed=11))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def eight_rows():
    # hand-checkable table: x_p in {1, 2}, x_c in {0, 1}
    return Dataset(
        {
            "xp": [1, 1, 1, 1, 2, 2, 2, 2],
            "xc": [0, 0, 1, 1, 0, 1, 1, 1],
            "y": [0, 1, 1, 1, 0, 1, 0, 1],
        },
        "y",
    )


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")
    return path


ACCEPTANCE_LINES = []


def record(criterion, description, ok, detail=""):
    line = f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {description}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
