import itertools

import numpy as np
import pytest

from cnot_forge.fixtures import load_fixture
from cnot_forge.gf2 import BitMatrix, SynthState, random_invertible
from cnot_forge.oracle import get_table


def as_array(m: BitMatrix) -> np.ndarray:
    return np.array([[int(ch) for ch in row] for row in m.to_strings()], dtype=np.int64)


def brute_inverse(a: np.ndarray) -> np.ndarray:
    """Inverse by enumerating every input vector; independent of any elimination code."""
    n = a.shape[0]
    inv = np.zeros((n, n), dtype=np.int64)
    found = 0
    for x in itertools.product((0, 1), repeat=n):
        y = a.dot(x) % 2
        if y.sum() == 1:
            inv[:, int(np.argmax(y))] = x
            found += 1
    assert found == n, "singular"
    return inv


def gate_matrix(n: int, control: int, target: int) -> np.ndarray:
    e = np.eye(n, dtype=np.int64)
    e[target, control] = 1
    return e


def random_state(n: int, rng: np.random.Generator) -> SynthState:
    return SynthState.from_matrix(random_invertible(n, int(rng.integers(1 << 30))))


@pytest.fixture(scope="session")
def table5():
    return get_table(5)


@pytest.fixture(scope="session")
def stuck5():
    return load_fixture("stuck5")


@pytest.fixture(scope="session")
def compare6():
    return load_fixture("compare6")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
