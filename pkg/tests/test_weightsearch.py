"""Random-search edge weighting against compressibility objectives."""

import numpy as np
import pytest

import infraspectral as isp
from infraspectral.errors import DegenerateSignalError
from infraspectral.weightsearch import SearchConfig, random_search, objective_value, search_result_json
from conftest import random_graph


def hidden_weight_corpus(n=30, seed=7, n_signals=12, kband=3, noise=0.02):
    """Signals built low-pass against a hidden weighting of a fixed topology.

    Returns (unit-weight topology, signals, hidden weights).  The signals
    carry a strong constant component, a band limited to the first `kband`
    non-constant harmonics of the hidden-weight basis, and a little
    broadband residue.
    """
    rng = np.random.default_rng(seed)
    topo = random_graph(rng, n, extra=n // 2, name="hidden")
    unit = isp.InfraGraph(n, tuple((t, h, 1.0) for t, h, _ in topo.edges), name="hidden")
    hidden_w = np.exp(rng.uniform(np.log(0.05), np.log(20.0), unit.edge_count))
    hidden = isp.InfraGraph(
        n, tuple((t, h, w) for (t, h, _), w in zip(unit.edges, hidden_w)), name="hidden"
    )
    basis = isp.compute_gft_basis(isp.underlying_laplacian(hidden))
    signals = []
    for _ in range(n_signals):
        coefs = np.zeros(n, dtype=complex)
        coefs[0] = 10.0
        coefs[1 : 1 + kband] = rng.normal(size=kband) + 1j * rng.normal(size=kband)
        coefs[1 + kband :] = noise * (
            rng.normal(size=n - 1 - kband) + 1j * rng.normal(size=n - 1 - kband)
        )
        signals.append(isp.GraphSignal(basis.vectors @ coefs, graph_name="hidden"))
    return unit, signals, hidden_w


@pytest.fixture(scope="module")
def corpus():
    return hidden_weight_corpus()


class TestObjectiveValue:
    def test_first_harmonic_corpus_has_full_lowband_energy(self):
        rng = np.random.default_rng(81)
        topo = random_graph(rng, 20, extra=8)
        basis = isp.compute_gft_basis(isp.underlying_laplacian(topo))
        f = isp.GraphSignal(basis.vectors[:, 1])
        cfg = SearchConfig(iterations=1, objective="mean_lowband_energy")
        weights = [abs(w) for _, _, w in topo.edges]
        assert objective_value(weights, topo, [f], cfg) == pytest.approx(1.0, abs=1e-12)

    def test_white_corpus_lp_ratio_matches_order_statistics_oracle(self):
        # Monte Carlo oracle over flat residual spectra: the mean-removed
        # low-pass ratio at 0.9 sits near 0.9 * (N-1)/N.
        g = isp.InfraGraph(100, tuple((i, i + 1, 1.0) for i in range(99)))
        rng = np.random.default_rng(82)
        cfg = SearchConfig(iterations=1)
        values = []
        for _ in range(20):
            signals = [
                isp.GraphSignal(rng.normal(size=100) + 1j * rng.normal(size=100))
                for _ in range(3)
            ]
            values.append(objective_value(np.ones(99), g, signals, cfg))
        assert np.mean(values) == pytest.approx(0.9, abs=0.1)

    def test_single_signal_corpus_is_mean_of_one(self, corpus):
        topo, signals, _ = corpus
        cfg = SearchConfig(iterations=1)
        alone = objective_value(np.ones(topo.edge_count), topo, signals[:1], cfg)
        assert isinstance(alone, float)

    def test_rejects_wrong_weight_count(self, corpus):
        topo, signals, _ = corpus
        cfg = SearchConfig(iterations=1)
        with pytest.raises(ValueError):
            objective_value(np.ones(topo.edge_count + 1), topo, signals, cfg)

    def test_rejects_pure_dc_corpus(self, corpus):
        topo, _, _ = corpus
        cfg = SearchConfig(iterations=1)
        flat = isp.GraphSignal(np.full(topo.vertex_count, 3.0))
        with pytest.raises(DegenerateSignalError):
            objective_value(np.ones(topo.edge_count), topo, [flat], cfg)

    def test_global_scaling_invariance(self, corpus):
        topo, signals, hidden_w = corpus
        cfg = SearchConfig(iterations=1)
        base = objective_value(hidden_w, topo, signals, cfg)
        for c in (0.1, 3.0, 250.0):
            assert objective_value(c * hidden_w, topo, signals, cfg) == pytest.approx(
                base, abs=1e-12
            )


class TestRandomSearch:
    def test_single_iteration_trajectory(self, corpus):
        topo, signals, _ = corpus
        cfg = SearchConfig(iterations=1, rng_seed=3)
        result = random_search(topo, signals, cfg)
        assert len(result.trajectory) == 2
        assert result.trajectory[0] == result.initial_objective
        assert result.trajectory[1] <= result.trajectory[0]

    def test_hidden_weight_corpus_improves_at_least_ten_percent(self, corpus):
        topo, signals, _ = corpus
        cfg = SearchConfig(iterations=500, rng_seed=1)
        result = random_search(topo, signals, cfg)
        rel_gain = (result.initial_objective - result.best_objective) / result.initial_objective
        assert rel_gain >= 0.10

    def test_trajectory_monotone_nonincreasing_for_lp_ratio(self, corpus):
        topo, signals, _ = corpus
        result = random_search(topo, signals, SearchConfig(iterations=60, rng_seed=5))
        assert all(b <= a for a, b in zip(result.trajectory, result.trajectory[1:]))
        assert result.best_objective == result.trajectory[-1]

    def test_trajectory_monotone_nondecreasing_for_lowband_energy(self, corpus):
        topo, signals, _ = corpus
        cfg = SearchConfig(iterations=60, rng_seed=5, objective="mean_lowband_energy")
        result = random_search(topo, signals, cfg)
        assert all(b >= a for a, b in zip(result.trajectory, result.trajectory[1:]))
        assert result.best_objective == result.trajectory[-1]

    def test_same_seed_is_bit_identical(self, corpus):
        topo, signals, _ = corpus
        cfg = SearchConfig(iterations=40, rng_seed=11)
        assert random_search(topo, signals, cfg) == random_search(topo, signals, cfg)

    def test_weights_respect_bounds(self, corpus):
        topo, signals, _ = corpus
        cfg = SearchConfig(iterations=50, rng_seed=13, weight_bounds=(0.5, 2.0))
        result = random_search(topo, signals, cfg)
        assert all(0.5 <= w <= 2.0 for w in result.best_weights) or result.best_weights == tuple(
            np.ones(topo.edge_count)
        )

    def test_disconnected_topology_warns(self):
        topo = isp.InfraGraph(4, ((0, 1, 1.0), (2, 3, 1.0)))
        rng = np.random.default_rng(83)
        basis = isp.compute_gft_basis(isp.underlying_laplacian(topo))
        coefs = np.zeros(4, dtype=complex)
        coefs[0] = 1.0
        coefs[2] = 0.5
        signals = [isp.GraphSignal(basis.vectors @ (coefs + 0.1 * rng.normal(size=4)))]
        with pytest.warns(UserWarning, match="disconnected"):
            random_search(topo, signals, SearchConfig(iterations=1, rng_seed=1))

    def test_size_cap_enforced_with_override(self):
        n = 600
        topo = isp.InfraGraph(n, tuple((i, i + 1, 1.0) for i in range(n - 1)))
        cfg = SearchConfig(iterations=1, rng_seed=1)
        with pytest.raises(ValueError, match="cap"):
            random_search(topo, [isp.GraphSignal(np.ones(n))], cfg)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SearchConfig(iterations=0)
        with pytest.raises(ValueError):
            SearchConfig(iterations=1, weight_bounds=(2.0, 1.0))
        with pytest.raises(ValueError):
            SearchConfig(iterations=1, objective="maximize_fun")


def test_search_result_json_keys_by_edge(corpus):
    topo, signals, _ = corpus
    result = random_search(topo, signals, SearchConfig(iterations=2, rng_seed=9))
    payload = search_result_json(result, topo)
    assert len(payload["weights"]) == topo.edge_count
    tail, head, _ = topo.edges[0]
    assert f"{tail}-{head}" in payload["weights"]
    assert payload["best_objective"] == result.best_objective
