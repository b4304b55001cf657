from __future__ import annotations

import numpy as np
import pytest

from qdelsim.pipeline import DeletionCode
from qdelsim.reed_solomon import RSParams
from qdelsim.state import SparseDensity

_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


SMALL = RSParams(N=3, K_C=2, K_D=2, t=1, E=2)
LARGE = RSParams(N=7, K_C=3, K_D=5, t=2, E=3)


@pytest.fixture(scope="session")
def small_code() -> DeletionCode:
    return DeletionCode(SMALL)


@pytest.fixture(scope="session")
def large_code() -> DeletionCode:
    return DeletionCode(LARGE)


def sparse_from_dense(rho: np.ndarray, n: int) -> SparseDensity:
    labels = [format(i, f"0{n}b") for i in range(1 << n)]
    bits = np.array([[int(c) for c in s] for s in labels], dtype=np.uint8).reshape(1 << n, n)
    return SparseDensity(n, bits, rho.copy()).pruned()
