import numpy as np
import pytest
from hypothesis import strategies as st

from gaborpr.signals import PolyGaussAtom, Signal

ACCEPTANCE_LINES: list[str] = []


def random_signal(rng: np.random.Generator, max_atoms: int = 3, max_degree: int = 4) -> Signal:
    """Random poly-Gauss signal with moderately chirped, moderately shifted atoms."""
    atoms = []
    for _ in range(rng.integers(1, max_atoms + 1)):
        deg = int(rng.integers(0, max_degree + 1))
        poly = tuple(rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))
        gamma = complex(rng.uniform(0.3, 2.0), rng.uniform(-1.0, 1.0))
        beta = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        delta = complex(rng.uniform(-0.5, 0.5), rng.uniform(-np.pi, np.pi))
        atoms.append(PolyGaussAtom(poly, gamma, beta, delta))
    return Signal(tuple(atoms))


@st.composite
def signals(draw, max_atoms=2, max_degree=3):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_signal(np.random.default_rng(seed), max_atoms, max_degree)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
