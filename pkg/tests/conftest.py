import glob
import os

import numpy as np
import pytest

import infraspectral as isp

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")

CASE_PATHS = sorted(glob.glob(os.path.join(FIXTURE_DIR, "*.m")))


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURE_DIR, name)


@pytest.fixture(scope="session")
def case14_text() -> str:
    with open(fixture_path("case14.m")) as fh:
        return fh.read()


@pytest.fixture(scope="session")
def all_cases() -> list[isp.PowerCase]:
    cases = []
    for path in CASE_PATHS:
        with open(path) as fh:
            cases.append(isp.parse_power_case(fh.read()))
    return cases


@pytest.fixture(scope="session")
def case14(case14_text) -> isp.PowerCase:
    return isp.parse_power_case(case14_text)


@pytest.fixture(scope="session")
def case14_pipeline(case14):
    """(graph, laplacian, basis, voltage signal) for the 14-bus fixture."""
    g = isp.power_graph(case14)
    lap = isp.underlying_laplacian(g)
    basis = isp.compute_gft_basis(lap)
    signal = isp.bus_voltage_signal(case14)
    return g, lap, basis, signal


def random_graph(rng: np.random.Generator, n: int, extra: int = 0,
                 complex_weights: bool = False, name: str = "random") -> isp.InfraGraph:
    """Connected random graph: spanning tree plus `extra` chords."""
    edges = []
    seen = set()
    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges.append((u, v))
        seen.add(frozenset((u, v)))
    added = 0
    extra = min(extra, n * (n - 1) // 2 - len(edges))
    while added < extra:
        a, b = (int(v) for v in rng.integers(0, n, 2))
        if a == b or frozenset((a, b)) in seen:
            continue
        seen.add(frozenset((a, b)))
        edges.append((a, b))
        added += 1
    if complex_weights:
        weights = rng.uniform(0.5, 3.0, len(edges)) * np.exp(
            1j * rng.uniform(-np.pi, np.pi, len(edges))
        )
    else:
        weights = rng.uniform(0.2, 4.0, len(edges)).astype(complex)
    return isp.InfraGraph(
        n, tuple((a, b, w) for (a, b), w in zip(edges, weights)), name=name
    )
