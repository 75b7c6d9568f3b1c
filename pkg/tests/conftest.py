import random
from pathlib import Path

import pytest

from irisplan.graph import ExplicitGraph

FIXTURES = Path(__file__).parent / "fixtures"

ACCEPTANCE_LINES: list[str] = []


def random_instance(rng: random.Random, n_range=(4, 10), k_range=(2, 5)) -> ExplicitGraph:
    """Connected graph with random coverage and edge lengths in [0.1, 2]."""
    n = rng.randint(*n_range)
    k = rng.randint(*k_range)
    covs = [[i for i in range(k) if rng.random() < 0.3] for _ in range(n)]
    edges = [(rng.randrange(v), v, rng.uniform(0.1, 2.0)) for v in range(1, n)]
    for _ in range(rng.randint(0, n)):
        a, b = rng.sample(range(n), 2)
        edges.append((a, b, rng.uniform(0.1, 2.0)))
    return ExplicitGraph.from_edges(covs, edges)


def instances(count: int, seed: int = 2024):
    rng = random.Random(seed)
    return [random_instance(rng) for _ in range(count)]


@pytest.fixture
def five_vertex():
    return ExplicitGraph.load(FIXTURES / "five_vertex.json")


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
