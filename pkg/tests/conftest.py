from importlib import resources
from pathlib import Path

import numpy as np
import pytest

DATA = Path(str(resources.files("djsim") / "data"))
BAD = Path(__file__).parent / "data" / "bad"

TABLE1 = (1, 1, 1, 1, 1, 1, 1, 1)
TABLE2 = (0, 0, 0, 0, 1, 1, 1, 1)


def dense_single(m, q, n):
    """Full 2**n operator for ``m`` on qubit ``q`` (qubit 0 least significant)."""
    ops = [np.eye(2)] * n
    ops[n - 1 - q] = m
    out = np.eye(1)
    for op in ops:
        out = np.kron(out, op)
    return out


def dense_controlled(m, control, target, n):
    p0 = np.diag([1.0, 0.0])
    p1 = np.diag([0.0, 1.0])
    return dense_single(p0, control, n) + dense_single(p1, control, n) @ dense_single(m, target, n)


def dense_permutation(perm):
    size = len(perm)
    P = np.zeros((size, size))
    P[np.asarray(perm), np.arange(size)] = 1.0
    return P


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def within_sigma(count, shots, p, k=5.0):
    sigma = np.sqrt(shots * p * (1 - p))
    return abs(count - shots * p) <= k * sigma


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def data_dir():
    return DATA


_criteria: list[tuple[str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _criteria.append((mark.args[0], "PASS" if rep.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in _criteria:
        terminalreporter.write_line(f"{status}  {label}")
