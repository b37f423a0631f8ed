"""Shared randomized-instance helpers."""

import numpy as np
import pytest


def rand_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2.0


def rand_psd(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    return g @ g.conj().T


def rand_state(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    m = rand_psd(rng, dim, rank)
    return m / np.trace(m).real


def rand_joint(rng: np.random.Generator, rows: int, cols: int, zeros: int = 0) -> np.ndarray:
    m = rng.random((rows, cols)) + 0.01
    if zeros:
        flat = rng.choice(rows * cols, size=min(zeros, rows * cols - 1), replace=False)
        m.ravel()[flat] = 0.0
    return m / m.sum()


@pytest.fixture
def np_rng() -> np.random.Generator:
    return np.random.default_rng(20260819)


# Acceptance tests record their verdict lines here; the summary hook
# replays them at the end of the run so they stay visible without
# turning on captured-output reporting for the whole suite.
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
