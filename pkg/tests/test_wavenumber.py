"""Fourier basis construction, projections, and band bookkeeping."""

import numpy as np
import pytest

import capmimo as cm
from capmimo.errors import ConfigurationError
from capmimo.solver import complex_gaussian
from capmimo.wavenumber import basis_eval


def test_truncation_order_default_band(scenario):
    order = cm.truncation_order(scenario.aperture, scenario.wave)
    assert (order.nx, order.ny, order.nz) == (4, 4, 0)
    assert order.n_f == 81


def test_truncation_order_grows_with_aperture(scenario):
    order = cm.truncation_order(cm.Aperture(1.0, 1.0), scenario.wave)
    assert (order.nx, order.ny) == (8, 8)
    assert cm.truncation_order(cm.Aperture(0.01, 0.01), scenario.wave).nx == 1


def test_truncation_order_snaps_near_integer_edges(scenario):
    lam = scenario.wave.wavelength
    # edge 3.005 falls inside the snap band, edge 3.02 does not
    assert cm.truncation_order(cm.Aperture(3.005 * lam, 0.5), scenario.wave).nx == 3
    assert cm.truncation_order(cm.Aperture(3.02 * lam, 0.5), scenario.wave).nx == 4


def test_truncation_order_rejects_negative_axis():
    with pytest.raises(ConfigurationError):
        cm.TruncationOrder(-1, 0, 0)


def test_indices_enumeration_is_x_fastest():
    idx = cm.TruncationOrder(1, 1, 0).indices()
    assert idx.shape == (9, 3)
    assert np.array_equal(idx[0], [-1, -1, 0])
    assert np.array_equal(idx[1], [0, -1, 0])
    assert np.array_equal(idx[-1], [1, 1, 0])


def test_order_covers_is_componentwise():
    big = cm.TruncationOrder(4, 4, 0)
    assert big.covers(cm.TruncationOrder(1, 4, 0))
    assert not cm.TruncationOrder(1, 4, 0).covers(big)


def test_basis_orthonormal_on_fine_grid(scenario):
    grid = cm.build_grid(scenario.aperture, 64, 64)
    basis = cm.FourierBasis(scenario.order, scenario.aperture, grid)
    gram = (basis.matrix * grid.weights[None, :]) @ np.conj(basis.matrix.T)
    assert np.max(np.abs(gram - np.eye(scenario.order.n_f))) < 1e-9


def test_basis_matches_pointwise_evaluation(scenario, grid, basis):
    idx = scenario.order.indices()
    for row in (0, 17, 80):
        direct = basis_eval(idx[row], grid.points, scenario.aperture)
        assert np.max(np.abs(direct - basis.matrix[row])) < 1e-13


def test_channel_spectrum_matches_direct_quadrature(scenario, grid, channels, basis, omega):
    idx = scenario.order.indices()
    for row in (3, 40):
        psi_n = basis_eval(idx[row], grid.points, scenario.aperture)
        direct = cm.integrate(channels[0] * psi_n[:, None, None], grid)
        assert np.max(np.abs(direct - omega[0, row])) < 1e-12 * np.max(np.abs(omega[0]))


def test_in_band_round_trip_restores_coefficients(scenario, grid, basis):
    rng = np.random.default_rng(11)
    coeffs = complex_gaussian(rng, (5, scenario.order.n_f, 3))
    theta = basis.synthesize(coeffs)
    back = basis.pattern_coeffs(theta)
    assert np.max(np.abs(back - coeffs)) < 1e-10 * np.max(np.abs(coeffs))


def test_coefficient_norm_matches_radiated_power(scenario, grid, basis):
    rng = np.random.default_rng(12)
    coeffs = complex_gaussian(rng, (scenario.order.n_f, 3))
    theta = basis.synthesize(coeffs)
    power_grid = cm.transmit_power(theta, grid)
    assert power_grid == pytest.approx(float(np.sum(np.abs(coeffs) ** 2)), rel=1e-10)


def test_synthesize_infers_square_enumeration(scenario, grid, basis):
    rng = np.random.default_rng(13)
    coeffs = complex_gaussian(rng, (scenario.order.n_f, 3))
    explicit = cm.synthesize_pattern(coeffs, grid, scenario.aperture, order=scenario.order)
    inferred = cm.synthesize_pattern(coeffs, grid, scenario.aperture)
    assert np.array_equal(explicit, inferred)
    with pytest.raises(ConfigurationError):
        cm.synthesize_pattern(coeffs[:10], grid, scenario.aperture)


def test_in_band_mask_counts(scenario):
    ref = scenario.order
    mask = cm.in_band_mask(ref, cm.TruncationOrder(1, 1, 0))
    assert mask.sum() == 9
    assert cm.in_band_mask(ref, ref).all()


def test_energy_ratio_monotone_in_band(scenario, omega):
    ref = scenario.order
    etas = [
        cm.energy_ratio_eta(omega[0], ref, cm.TruncationOrder(n, n, 0))
        for n in range(1, ref.nx + 1)
    ]
    assert all(a <= b + 1e-15 for a, b in zip(etas, etas[1:]))
    assert etas[-1] == pytest.approx(1.0, abs=1e-15)


def test_energy_ratio_requires_covering_reference(scenario, omega):
    with pytest.raises(ConfigurationError):
        cm.energy_ratio_eta(omega[0], cm.TruncationOrder(1, 1, 0), scenario.order)


def test_in_band_energy_never_exceeds_total(scenario, grid, channels, omega):
    in_band = float(np.sum(np.abs(omega[0]) ** 2))
    total = cm.spectral_energy(channels[0], grid)
    assert in_band <= total * (1.0 + 1e-12)
    # a far user radiates mostly inside the propagating band
    assert in_band > 0.9 * total
