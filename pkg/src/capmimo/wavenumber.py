"""Truncated Fourier basis on the aperture and the continuous-discrete
transforms between pattern functions and wavenumber coefficients.

The basis Psi_n(s) = (1/sqrt(A_T)) * exp(2pi*j*(nx*(ux - Lx/2)/Lx
+ ny*(uy - Ly/2)/Ly)), with u = s - center in the aperture's local frame, is
orthonormal on the aperture. For a planar aperture the z term is identically
one, so nz is fixed to 0. Index enumeration is lexicographic with nz outer,
ny middle, nx inner, and is the deterministic layout every coefficient array
in the package follows.
"""

import math
from dataclasses import dataclass

import numpy as np

from .emfield import integrate
from .errors import ConfigurationError, DegenerateChannelError

BAND_EDGE_SNAP = 1.0e-2
"""A band edge kappa0*L/2pi within this distance of an integer is treated as
exactly at the edge; a 1% overhang does not warrant a whole extra Fourier
shell of (2N+1)^2 coefficients."""


@dataclass(frozen=True)
class TruncationOrder:
    """Per-axis retained index range; N_F = (2nx+1)(2ny+1)(2nz+1)."""

    nx: int
    ny: int
    nz: int = 0

    def __post_init__(self):
        if self.nx < 0 or self.ny < 0 or self.nz < 0:
            raise ConfigurationError("truncation order must be nonnegative per axis")

    @property
    def n_f(self):
        return (2 * self.nx + 1) * (2 * self.ny + 1) * (2 * self.nz + 1)

    def indices(self):
        """All retained (nx, ny, nz) triples, shape (N_F, 3), nz outer / nx inner."""
        ax = np.arange(-self.nx, self.nx + 1)
        ay = np.arange(-self.ny, self.ny + 1)
        az = np.arange(-self.nz, self.nz + 1)
        gz, gy, gx = np.meshgrid(az, ay, ax, indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel(), gz.ravel()])

    def covers(self, other):
        return self.nx >= other.nx and self.ny >= other.ny and self.nz >= other.nz


def _axis_count(length, kappa0):
    if length <= 0.0:
        return 0
    edge = kappa0 * length / (2.0 * np.pi)
    return max(1, math.ceil(edge - BAND_EDGE_SNAP))


def truncation_order(aperture, wave):
    """Smallest index range whose spatial frequencies cover the |kappa| <= kappa0
    band per axis: N = ceil(kappa0*L/2pi), with near-integer band edges snapped
    (see BAND_EDGE_SNAP). Planar aperture, so nz = 0."""
    return TruncationOrder(
        nx=_axis_count(aperture.lx, wave.kappa0),
        ny=_axis_count(aperture.ly, wave.kappa0),
        nz=0,
    )


def basis_eval(n, s, aperture):
    """Psi_n evaluated at point(s) s; s may be (3,) or (..., 3)."""
    s = np.asarray(s, dtype=float)
    cx, cy, _ = aperture.center
    ux = s[..., 0] - cx
    uy = s[..., 1] - cy
    phase = 2.0 * np.pi * (
        n[0] * (ux - aperture.lx / 2.0) / aperture.lx
        + n[1] * (uy - aperture.ly / 2.0) / aperture.ly
    )
    return np.exp(1j * phase) / np.sqrt(aperture.area)


class FourierBasis:
    """Basis matrix Psi_n(s_i) over a grid, with the transforms built on it.

    Precomputes the (N_F, I_s) evaluation matrix once; channel_spectrum,
    pattern_coeffs, and synthesize are then single contractions.
    """

    def __init__(self, order, aperture, grid):
        self.order = order
        self.aperture = aperture
        self.grid = grid
        idx = order.indices()
        cx, cy, _ = aperture.center
        ux = grid.points[:, 0] - cx
        uy = grid.points[:, 1] - cy
        phase = 2.0 * np.pi * (
            idx[:, 0, None] * (ux[None, :] - aperture.lx / 2.0) / aperture.lx
            + idx[:, 1, None] * (uy[None, :] - aperture.ly / 2.0) / aperture.ly
        )
        self.matrix = np.exp(1j * phase) / np.sqrt(aperture.area)
        self._weighted = self.matrix * grid.weights[None, :]

    def channel_spectrum(self, samples):
        """Omega_n = integral of G(s) Psi_n(s); samples (..., I_s, 3, 3) -> (..., N_F, 3, 3)."""
        return np.einsum("ni,...iab->...nab", self._weighted, samples)

    def pattern_coeffs(self, theta):
        """w_n = integral of theta(s) Psi_n*(s); theta (..., I_s, 3) -> (..., N_F, 3)."""
        return np.einsum("ni,...ia->...na", np.conj(self._weighted), theta)

    def synthesize(self, coeffs):
        """theta(s_i) = sum_n w_n Psi_n(s_i); coeffs (..., N_F, 3) -> (..., I_s, 3)."""
        return np.einsum("...na,ni->...ia", coeffs, self.matrix)


def channel_spectrum(samples, grid, order, aperture):
    """Wavenumber-domain channel: Omega_n = integrate(G(s) * Psi_n(s)) per index."""
    return FourierBasis(order, aperture, grid).channel_spectrum(samples)


def pattern_coeffs(theta, grid, order, aperture):
    """Orthonormal-expansion projections w_n = integrate(theta(s) * Psi_n*(s))."""
    return FourierBasis(order, aperture, grid).pattern_coeffs(theta)


def synthesize_pattern(coeffs, grid, aperture, order=None):
    """Reconstruct theta on the grid from its coefficients.

    order may be omitted when coeffs came from a square enumeration that the
    caller also used to build them; it is required in general because the
    coefficient axis alone does not identify the per-axis ranges.
    """
    if order is None:
        order = _square_order_for(coeffs.shape[-2])
    return FourierBasis(order, aperture, grid).synthesize(coeffs)


def _square_order_for(n_f):
    side = math.isqrt(n_f)
    if side * side != n_f or side % 2 == 0:
        raise ConfigurationError(
            f"cannot infer a square planar order from N_F={n_f}; pass order explicitly"
        )
    return TruncationOrder(nx=(side - 1) // 2, ny=(side - 1) // 2, nz=0)


def in_band_mask(reference, order):
    """Boolean mask over reference enumeration rows that fall within order."""
    idx = reference.indices()
    return (
        (np.abs(idx[:, 0]) <= order.nx)
        & (np.abs(idx[:, 1]) <= order.ny)
        & (np.abs(idx[:, 2]) <= order.nz)
    )


def energy_ratio_eta(omega_ref, reference, order):
    """In-band fraction of wavenumber-domain channel energy.

    omega_ref holds Omega at the reference order (shape (..., N_F_ref, 3, 3));
    eta = sum of ||Omega_n||_F^2 within order / same sum within reference.
    """
    if not reference.covers(order):
        raise ConfigurationError("reference order must cover the requested order")
    energy = np.sum(np.abs(omega_ref) ** 2, axis=(-2, -1))
    total = float(np.sum(energy))
    if total <= 0.0:
        raise DegenerateChannelError("channel spectrum carries no energy")
    mask = in_band_mask(reference, order)
    return min(1.0, float(np.sum(energy[..., mask])) / total)


def spectral_energy(g_samples, grid):
    """Quadrature integral of ||G(s)||_F^2, the full-band Parseval total."""
    return float(np.real(integrate(np.sum(np.abs(g_samples) ** 2, axis=(-2, -1)), grid)))
