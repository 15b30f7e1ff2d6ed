import numpy as np
import pytest

from graphsample.graph_core import build_erdos_renyi, build_ring_knn, build_star, normalize_shift
from graphsample.spectral import decompose


def basis_of(graph):
    return decompose(normalize_shift(graph))


@pytest.fixture(scope="session")
def star4():
    return basis_of(build_star(4))


@pytest.fixture(scope="session")
def ring8():
    return basis_of(build_ring_knn(8, 2))


@pytest.fixture(scope="session")
def ring64():
    return basis_of(build_ring_knn(64, 4))


@pytest.fixture(scope="session")
def star64():
    return basis_of(build_star(64))


@pytest.fixture(scope="session")
def er64():
    return basis_of(build_erdos_renyi(64, 0.2, seed=0))


@pytest.fixture(scope="session", params=["ring", "er", "star"])
def family64(request, ring64, er64, star64):
    return {"ring": ring64, "er": er64, "star": star64}[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line per acceptance criterion; printed again in the terminal summary."""

    def report(criterion: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
