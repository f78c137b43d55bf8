import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from svineq import generators as gen
from svineq.linalg_core import DEFAULT_TOLERANCES, Tolerances

settings.register_profile(
    "svineq",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("svineq")


@pytest.fixture
def tol() -> Tolerances:
    return DEFAULT_TOLERANCES


@pytest.fixture
def lapack() -> Tolerances:
    return Tolerances(solver="lapack")


@pytest.fixture
def rng() -> np.random.Generator:
    return gen.stream(1234, "tests")


@pytest.fixture
def cartesian_example() -> np.ndarray:
    """A = [[-1+i, 1], [i, 1+2i]], a non-normal matrix whose Cartesian bounds still hold."""
    return np.array([[-1 + 1j, 1], [1j, 1 + 2j]])


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    """Keep a developer's SVINEQ_* variables and .env out of the tests."""
    for name in list(os.environ):
        if name.startswith("SVINEQ_"):
            monkeypatch.delenv(name, raising=False)
    monkeypatch.setattr("svineq.config.load_dotenv", lambda **_: False)
