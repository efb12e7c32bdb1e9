import json

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from dvqe import data_path
from dvqe.qubo_model import load_problem, load_uc

settings.register_profile(
    "dvqe", max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("dvqe")

# filled by tests/test_acceptance.py, printed once at the end of the session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def example(k: int):
    with open(data_path(f"example{k}.json")) as fh:
        return load_problem(fh.read())


def scenario(k: int):
    with open(data_path(f"scenario{k}.json")) as fh:
        return load_uc(fh.read())


def random_state(rng, n: int) -> np.ndarray:
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


@pytest.fixture
def write_json(tmp_path):
    def _write(name, payload):
        path = tmp_path / name
        path.write_text(payload if isinstance(payload, str) else json.dumps(payload))
        return str(path)

    return _write
