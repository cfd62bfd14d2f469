import numpy as np
import pytest

from kcluster.graph import WeightedGraph
from kcluster.kernel import OnePassCy

BACKENDS = ["python"] + (["cython"] if OnePassCy is not None else [])

# vertex ids for the running example: a-b-c-d
A, B, C, D = range(4)


def path_graph(wab=1.0, wbc=3.0, wcd=2.0):
    return WeightedGraph.from_edges(4, [(A, B, wab), (B, C, wbc), (C, D, wcd)])


def random_graph(rng, n=None, density=None, integer_weights=False, n_max=50):
    n = int(rng.integers(1, n_max + 1)) if n is None else n
    density = rng.uniform(0.05, 1.0) if density is None else density
    iu, iv = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < density
    u, v = iu[keep], iv[keep]
    flip = rng.random(len(u)) < 0.5
    u, v = np.where(flip, v, u), np.where(flip, u, v)
    if integer_weights:
        w = rng.integers(0, 6, len(u)).astype(float)
    else:
        w = rng.random(len(u))
    return WeightedGraph(n, u, v, w)


@pytest.fixture
def path():
    return path_graph()


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


ACCEPTANCE_LINES: list[str] = []


def record(number: int, title: str, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s[7:9])):
            terminalreporter.write_line(line)
