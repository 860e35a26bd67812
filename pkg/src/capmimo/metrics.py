"""Figures of merit: transmit power, received fields, interference covariance,
sum rate, per-user MSE, the weighted-MSE surrogate, and the truncation-loss
bound for single-user links."""

import numpy as np

from .emfield import integrate
from .errors import ConfigurationError, DegenerateChannelError
from .wavenumber import energy_ratio_eta, spectral_energy

MA2_TO_A2 = 1.0e-6
"""Power budget unit conversion: (mA)^2 per A^2, fixed by the one-time
calibration of the default scenario and never re-tuned."""

_LN2 = float(np.log(2.0))


class LinkBudget:
    """Transmit power budget and receiver noise power.

    pt_ma2 is the budget in (mA)^2 as configured; pt_a2 is the value every
    formula consumes. sigma2 is the noise power in V^2/m^2, used as-is.
    """

    __slots__ = ("pt_ma2", "sigma2")

    def __init__(self, pt_ma2, sigma2):
        if pt_ma2 <= 0.0 or sigma2 <= 0.0:
            raise ConfigurationError(
                f"power budget and noise power must be positive, got {pt_ma2}, {sigma2}"
            )
        self.pt_ma2 = float(pt_ma2)
        self.sigma2 = float(sigma2)

    @property
    def pt_a2(self):
        return self.pt_ma2 * MA2_TO_A2

    def __repr__(self):
        return f"LinkBudget(pt_ma2={self.pt_ma2}, sigma2={self.sigma2})"


def transmit_power(theta, grid):
    """Total radiated-power proxy: sum_k integrate(||theta_k(s)||^2).

    theta is (I_s, 3) for one pattern or (K, I_s, 3) for a set.
    """
    theta = np.asarray(theta)
    density = np.sum(np.abs(theta) ** 2, axis=-1)
    if density.ndim == 1:
        return float(np.real(integrate(density, grid)))
    return float(np.real(np.sum(density @ grid.weights)))


def field_at_user(g_samples, theta_samples, grid):
    """Received field 3-vector: integrate(G_k(s) theta_j(s))."""
    products = np.einsum("iab,ib->ia", g_samples, theta_samples)
    return integrate(products, grid)


def all_fields(channels, theta, grid):
    """Field of every pattern at every user: F[k, j] = integrate(G_k theta_j).

    channels (K, I_s, 3, 3), theta (K, I_s, 3) -> (K, K, 3).
    """
    return np.einsum("i,kiab,jib->kja", grid.weights, channels, theta)


def interference_matrix(cross_fields, sigma2):
    """J_k = sum_j beta_kj beta_kj^H + sigma2 I3 over the interfering fields.

    cross_fields holds the beta_kj for j != k as rows, shape (K-1, 3); an
    empty array gives the noise-only covariance.
    """
    cross_fields = np.asarray(cross_fields, dtype=complex).reshape(-1, 3)
    j_mat = np.einsum("ja,jb->ab", cross_fields, np.conj(cross_fields))
    j_mat = j_mat + sigma2 * np.eye(3)
    return 0.5 * (j_mat + j_mat.conj().T)


def sinr_from_fields(fields, sigma2, interference_free=False):
    """Per-user SINR alpha_k^H J_k^{-1} alpha_k from the (K, K, 3) field table."""
    k_users = fields.shape[0]
    sinr = np.empty(k_users)
    for k in range(k_users):
        alpha = fields[k, k]
        if interference_free:
            sinr[k] = float(np.real(np.vdot(alpha, alpha)) / sigma2)
            continue
        cross = np.delete(fields[k], k, axis=0)
        j_mat = interference_matrix(cross, sigma2)
        sinr[k] = float(np.real(np.vdot(alpha, np.linalg.solve(j_mat, alpha))))
    return sinr


def sum_rate_from_fields(fields, sigma2, interference_free=False):
    """Sum rate in bits/s/Hz via the rank-one identity log2(1 + a^H J^-1 a)."""
    return float(np.sum(np.log2(1.0 + sinr_from_fields(fields, sigma2, interference_free))))


def sum_rate(theta, channels, grid, budget):
    """Sum of per-user mutual information for a pattern set, bits/s/Hz."""
    return sum_rate_from_fields(all_fields(channels, theta, grid), budget.sigma2)


def mse_from_fields(fields, combiners, sigma2, interference_free=False):
    """Per-user decoding MSE given the field table and combiners, shape (K,)."""
    k_users = fields.shape[0]
    proj = np.einsum("ka,kja->kj", np.conj(combiners), fields)  # psi_k^H beta_kj
    desired = np.abs(1.0 - np.diagonal(proj)) ** 2
    if interference_free:
        cross = np.zeros(k_users)
    else:
        off = np.abs(proj) ** 2
        cross = np.sum(off, axis=1) - np.diagonal(off)
    noise = sigma2 * np.sum(np.abs(combiners) ** 2, axis=1)
    return desired + cross + noise


def mse(theta, psi_k, channels, grid, sigma2, k):
    """Decoding MSE of user k: |1 - psi^H alpha_k|^2 + interference + noise terms."""
    fields = all_fields(channels, theta, grid)
    proj = np.conj(psi_k) @ fields[k].T  # psi^H beta_kj for all j
    cross = np.sum(np.abs(np.delete(proj, k)) ** 2)
    return float(
        np.abs(1.0 - proj[k]) ** 2 + cross + sigma2 * np.real(np.vdot(psi_k, psi_k))
    )


def surrogate_rate(rho, errors):
    """Weighted-MSE surrogate: sum log2(rho_k) - (1/ln2) sum rho_k E_k + K/ln2."""
    rho = np.asarray(rho, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if np.any(rho <= 0.0):
        raise ConfigurationError("auxiliary weights rho must be positive")
    k_users = rho.shape[0]
    return float(np.sum(np.log2(rho)) - np.sum(rho * errors) / _LN2 + k_users / _LN2)


def snr_loss_bound(omega_ref, reference, order, g_samples, grid, budget):
    """Upper bound on the single-user SNR lost to truncation.

    (P_T/sigma2) * sqrt(1 - eta) * (1 + sqrt(eta)) * integral of ||G||_F^2,
    with eta the in-band energy fraction of the channel spectrum.
    """
    eta = energy_ratio_eta(omega_ref, reference, order)
    total = spectral_energy(g_samples, grid)
    if total <= 0.0:
        raise DegenerateChannelError("channel carries no energy over the aperture")
    return (budget.pt_a2 / budget.sigma2) * np.sqrt(max(0.0, 1.0 - eta)) * (1.0 + np.sqrt(eta)) * total
