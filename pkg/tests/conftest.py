from pathlib import Path

import numpy as np
import pytest

from rd_exponent import (
    JointPmf,
    OperatingPoint,
    SearchConfig,
    SolverConfig,
    validate_problem,
)

EXAMPLES_DATA = Path(__file__).parent.parent / "examples_data"

HAMMING = [[0.0, 1.0], [1.0, 0.0]]


def random_problem(rng: np.random.Generator, rows: int, columns: int):
    """A random problem with a zero entry in every row."""
    source = rng.dirichlet(np.ones(rows))
    distortion = rng.uniform(0.1, 1.0, size=(rows, columns))
    distortion[np.arange(rows), rng.integers(columns, size=rows)] = 0.0
    return validate_problem(source, distortion)


def random_joint(rng: np.random.Generator, rows: int, columns: int) -> JointPmf:
    return JointPmf(probs=rng.dirichlet(np.ones(rows * columns)).reshape(rows, columns))


@pytest.fixture
def make_problem():
    return random_problem


@pytest.fixture
def make_joint():
    return random_joint


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def uniform_hamming():
    return validate_problem([0.5, 0.5], HAMMING)


@pytest.fixture
def skewed_hamming():
    return validate_problem([0.8, 0.2], HAMMING)


@pytest.fixture
def ternary_problem():
    return validate_problem(
        [0.5, 0.3, 0.2],
        [[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]],
    )


@pytest.fixture
def point():
    return OperatingPoint(rate=0.2, delta=0.1)


@pytest.fixture
def solver_config():
    return SolverConfig(tol=1e-12, max_iters=200_000)


@pytest.fixture
def fast_search_config():
    return SearchConfig(mu_tol=1e-3, lambda_tol=1e-3)


@pytest.fixture
def uniform_hamming_file():
    return EXAMPLES_DATA / "binary_hamming.json"


@pytest.fixture
def skewed_hamming_file():
    return EXAMPLES_DATA / "binary_hamming_skewed.json"
