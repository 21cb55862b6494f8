import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from chow_engine import from_matrix
from chow_engine.catalog import catalog

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

CATALOG = catalog()
LOOPLESS = {k: M for k, M in CATALOG.items() if M.is_loopless}
CHOW = {k: M for k, M in LOOPLESS.items() if M.r >= 1}


def random_matrix_matroid(rng: random.Random, modulus: int, max_rank: int = 4,
                          max_cols: int = 7, loopless: bool = False):
    rows = rng.randint(1, max_rank)
    cols = rng.randint(1, max_cols)
    columns = []
    while len(columns) < cols:
        col = [rng.randrange(modulus) for _ in range(rows)]
        if loopless and not any(col):
            continue
        columns.append(col)
    entries = [[columns[j][i] for j in range(cols)] for i in range(rows)]
    return from_matrix(rows, cols, entries, modulus)


@st.composite
def matrix_matroids(draw, loopless=False, max_rank=4, max_cols=6):
    seed = draw(st.integers(0, 2**32 - 1))
    modulus = draw(st.sampled_from([2, 3]))
    return random_matrix_matroid(random.Random(seed), modulus, max_rank, max_cols, loopless)


@pytest.fixture(params=sorted(CHOW), ids=sorted(CHOW))
def chow_matroid(request):
    return CHOW[request.param]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
