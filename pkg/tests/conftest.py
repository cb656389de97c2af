import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from freeride.gf2 import SparseBitMatrix
from freeride.ldpc import LdpcCode, construct_regular

# Extended Hamming [8,4] (self-dual, RM(1,3)) in a weight-4 check basis; the
# basis containing the all-ones row is too loopy for sum-product.
H84 = np.array(
    [
        [1, 1, 1, 1, 0, 0, 0, 0],
        [0, 0, 1, 1, 1, 1, 0, 0],
        [0, 0, 0, 0, 1, 1, 1, 1],
        [0, 1, 0, 1, 0, 1, 0, 1],
    ],
    dtype=np.uint8,
)


@pytest.fixture(scope="session")
def code8064():
    return construct_regular(8064, 3, 6, seed=1)


@pytest.fixture(scope="session")
def code128():
    return construct_regular(128, 3, 6, seed=0)


@pytest.fixture(scope="session")
def code1008():
    return construct_regular(1008, 3, 6, seed=0)


@pytest.fixture(scope="session")
def hamming84():
    return LdpcCode.from_parity_check(SparseBitMatrix.from_array(H84))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one ``CRITERION k: PASS|FAIL`` line; all lines are repeated in the terminal summary."""

    def emit(criterion: int, ok: bool, detail: str = "") -> bool:
        line = f"CRITERION {criterion}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
