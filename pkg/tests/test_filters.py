"""Filter construction and algebra."""

import numpy as np
import pytest

import infraspectral as isp
from conftest import random_graph


@pytest.fixture(scope="module")
def setup():
    rng = np.random.default_rng(41)
    g = random_graph(rng, 12, extra=8, complex_weights=True, name="filters")
    lap = isp.underlying_laplacian(g)
    b = isp.compute_gft_basis(lap)
    f = isp.GraphSignal(rng.normal(size=12) + 1j * rng.normal(size=12))
    return b, f, rng


def test_identity_filter_is_identity(setup):
    b, f, _ = setup
    h = isp.FilterResponse(np.ones(b.size), b)
    out = isp.apply_filter(b, h, f)
    assert np.max(np.abs(out.values - f.values)) <= 1e-12 * np.linalg.norm(f.values)


def test_dc_projector_yields_signal_mean(setup):
    b, f, _ = setup
    h = isp.lowpass_filter(b, 1)
    out = isp.apply_filter(b, h, f)
    assert np.allclose(out.values, np.mean(f.values), atol=1e-10)


def test_zero_filter_zeroes_signal(setup):
    b, f, _ = setup
    h = isp.FilterResponse(np.zeros(b.size), b)
    assert np.allclose(isp.apply_filter(b, h, f).values, 0.0, atol=1e-14)


def test_lowpass_full_band_is_identity(setup):
    b, f, _ = setup
    out = isp.apply_filter(b, isp.lowpass_filter(b, b.size), f)
    assert np.allclose(out.values, f.values, atol=1e-12)


def test_lowpass_cutoff_bounds(setup):
    b, _, _ = setup
    with pytest.raises(ValueError):
        isp.lowpass_filter(b, 0)
    with pytest.raises(ValueError):
        isp.lowpass_filter(b, b.size + 1)


def test_lowpass_at_compressibility_cutoff_retains_energy(setup):
    b, f, _ = setup
    s = isp.forward_gft(b, f)
    k = isp.lowpass_compressibility(s, 0.999)
    out = isp.apply_filter(b, isp.lowpass_filter(b, k), f)
    assert out.energy >= 0.999 * f.energy * (1 - 1e-12)


def test_highpass_complement_algebra(setup):
    b, f, _ = setup
    h_lp = isp.lowpass_filter(b, 4)
    h_hp = isp.highpass_complement(h_lp)
    assert np.array_equal(h_hp.gains, 1.0 - h_lp.gains)
    # complement of identity is the zero filter
    assert np.array_equal(isp.highpass_complement(isp.lowpass_filter(b, b.size)).gains, 0.0 * h_lp.gains)
    # partition of unity reconstructs any signal
    recon = (
        isp.apply_filter(b, h_lp, f).values + isp.apply_filter(b, h_hp, f).values
    )
    assert np.max(np.abs(recon - f.values)) <= 1e-12 * np.linalg.norm(f.values)


def test_complement_of_dc_projector_removes_mean(setup):
    b, f, _ = setup
    h = isp.highpass_complement(isp.lowpass_filter(b, 1))
    out = isp.apply_filter(b, h, f)
    assert abs(np.mean(out.values)) <= 1e-12


def test_complement_rejects_gains_above_one(setup):
    b, _, _ = setup
    with pytest.raises(ValueError):
        isp.highpass_complement(isp.FilterResponse(np.full(b.size, 1.5), b))


class TestTvRegularization:
    def test_alpha_zero_is_identity(self, setup):
        b, _, _ = setup
        assert np.allclose(isp.tv_regularization_filter(b, 0.0).gains, 1.0)

    def test_unit_gain_at_zero_eigenvalue(self, setup):
        b, _, _ = setup
        for alpha in (0.01, 1.0, 1e6):
            assert isp.tv_regularization_filter(b, alpha).gains[0] == 1.0

    def test_direct_formula_value(self, setup):
        # alpha = 10, lambda = 1 gives 1/21.
        b, _, _ = setup
        h = isp.tv_regularization_filter(b, 10.0)
        expected = 1.0 / (1.0 + 2.0 * 10.0 * b.eigenvalues)
        assert np.allclose(h.gains, expected, rtol=1e-15)
        assert 1.0 / (1.0 + 2.0 * 10.0 * 1.0) == pytest.approx(0.047619047619, rel=1e-9)

    def test_gains_decrease_in_eigenvalue_and_alpha(self, setup):
        b, _, _ = setup
        h1 = isp.tv_regularization_filter(b, 0.5).gains
        h2 = isp.tv_regularization_filter(b, 2.0).gains
        positive = b.eigenvalues > 0
        assert np.all(np.diff(h1[positive]) < 0) or np.all(np.diff(b.eigenvalues[positive]) >= 0)
        # strictly decreasing wherever eigenvalues strictly increase
        lam = b.eigenvalues
        for k in range(1, b.size):
            if lam[k] > lam[k - 1]:
                assert h1[k] < h1[k - 1]
        assert np.all(h2[positive] < h1[positive])

    def test_rejects_negative_alpha(self, setup):
        b, _, _ = setup
        with pytest.raises(ValueError):
            isp.tv_regularization_filter(b, -1.0)


class TestFilterInvariants:
    def test_binary_filters_are_projections(self, setup):
        b, f, _ = setup
        h = isp.lowpass_filter(b, 5)
        once = isp.apply_filter(b, h, f)
        twice = isp.apply_filter(b, h, once)
        assert np.max(np.abs(twice.values - once.values)) <= 1e-12 * np.linalg.norm(once.values)

    def test_energy_non_expansion(self, setup):
        b, _, rng = setup
        for _ in range(20):
            f = isp.GraphSignal(rng.normal(size=b.size) + 1j * rng.normal(size=b.size))
            gains = rng.uniform(0.0, 1.0, b.size)
            out = isp.apply_filter(b, isp.FilterResponse(gains, b), f)
            assert np.sqrt(out.energy) <= gains.max() * np.sqrt(f.energy) * (1 + 1e-12)

    def test_filters_commute(self, setup):
        b, f, _ = setup
        h1 = isp.tv_regularization_filter(b, 0.7)
        h2 = isp.lowpass_filter(b, 6)
        ab = isp.apply_filter(b, h1, isp.apply_filter(b, h2, f))
        ba = isp.apply_filter(b, h2, isp.apply_filter(b, h1, f))
        assert np.max(np.abs(ab.values - ba.values)) <= 1e-10 * np.linalg.norm(f.values)


def test_gain_validation(setup):
    b, _, _ = setup
    with pytest.raises(ValueError):
        isp.FilterResponse(np.full(b.size, -0.1), b)
    with pytest.raises(ValueError):
        isp.FilterResponse(np.full(b.size, np.nan), b)
    with pytest.raises(isp.DimensionMismatchError):
        isp.FilterResponse(np.ones(b.size + 1), b)
