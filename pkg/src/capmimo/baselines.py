"""Comparison schemes: conjugate match filtering, patch-array digital
precoding, and the interference-free relaxation."""

import time
from dataclasses import dataclass

import numpy as np

from .emfield import build_grid, channel_samples
from .errors import DegenerateChannelError, GridResolutionError
from .metrics import transmit_power
from .solver import SolverConfig, _bcd, stacked_channel
from .wavenumber import FourierBasis, TruncationOrder

MIN_POINTS_PER_PATCH = 9
_MAX_REFINEMENTS = 6
# Wide fixed band for the relaxation so truncation never binds the bound.
UPPER_BOUND_ORDER = TruncationOrder(7, 7, 0)


def mf_design(channels, grid, budget):
    """Conjugate-channel patterns with fixed y-polarized combiners.

    theta_k(s) = sqrt(p) G_k^H(s) e_y, with one scalar p spending the full
    power budget across all users. Returns (patterns (K, I_s, 3),
    combiners (K, 3)).
    """
    channels = np.asarray(channels)
    matched = np.conj(channels[:, :, 1, :])
    total = transmit_power(matched, grid)
    if total <= 0.0:
        raise DegenerateChannelError("all channels vanish on the aperture")
    theta = np.sqrt(budget.pt_a2 / total) * matched
    psi = np.zeros((channels.shape[0], 3))
    psi[:, 1] = 1.0
    return theta, psi


@dataclass(frozen=True)
class PatchLayout:
    """Half-wavelength lattice of disc patches covering the aperture."""

    centers: np.ndarray
    radius: float
    mx: int
    my: int

    @property
    def count(self):
        return self.mx * self.my


def patch_layout(aperture, wave):
    """Patch grid with Mx = ceil(2 Lx / lambda) columns and disc area
    lambda^2 / (4 pi) per element; centers start flush with the lower-left
    aperture corner and step by lambda/2."""
    lam = wave.wavelength
    mx = int(np.ceil(2.0 * aperture.lx / lam))
    my = int(np.ceil(2.0 * aperture.ly / lam))
    m_idx = np.arange(mx * my)
    centers = np.zeros((mx * my, 3))
    centers[:, 0] = (m_idx % mx) * lam / 2.0 - aperture.lx / 2.0 + aperture.center[0]
    centers[:, 1] = (m_idx // mx) * lam / 2.0 - aperture.ly / 2.0 + aperture.center[1]
    centers[:, 2] = aperture.center[2]
    return PatchLayout(centers=centers, radius=lam / (2.0 * np.sqrt(np.pi)), mx=mx, my=my)


def _patch_masks(layout, grid):
    d2 = np.sum((grid.points[None, :, :2] - layout.centers[:, None, :2]) ** 2, axis=2)
    return d2 <= layout.radius ** 2


def patch_channels(channels, layout, grid):
    """Aggregated per-patch channels H[k, m] = integrate(G_k over disc m) / sqrt(A_m).

    A_m is the quadrature mass actually enclosed, so discs clipped by the
    aperture edge keep a unit-power normalization.
    """
    channels = np.asarray(channels)
    masks = _patch_masks(layout, grid)
    counts = masks.sum(axis=1)
    if np.any(counts == 0):
        worst = int(np.argmin(counts))
        raise GridResolutionError(
            f"patch {worst} encloses no quadrature points; rerun with a finer grid"
        )
    masked_w = masks * grid.weights[None, :]
    areas = masked_w.sum(axis=1)
    h = np.einsum("mi,kiab->kmab", masked_w, channels)
    return h / np.sqrt(areas)[None, :, None, None]


def digital_patch_setup(scenario):
    """Layout plus patch channels, refining the grid 2x until every disc
    encloses at least MIN_POINTS_PER_PATCH quadrature points."""
    layout = patch_layout(scenario.aperture, scenario.wave)
    nx, ny = scenario.grid_nx, scenario.grid_ny
    for _ in range(_MAX_REFINEMENTS + 1):
        grid = build_grid(scenario.aperture, nx, ny)
        counts = _patch_masks(layout, grid).sum(axis=1)
        if counts.min() >= MIN_POINTS_PER_PATCH:
            channels = np.stack([channel_samples(u, grid, scenario.wave) for u in scenario.users])
            return layout, patch_channels(channels, layout, grid), grid
        nx, ny = 2 * nx, 2 * ny
    raise GridResolutionError(
        f"could not enclose {MIN_POINTS_PER_PATCH} points per patch within "
        f"{_MAX_REFINEMENTS} grid refinements"
    )


@dataclass
class DigitalSolveResult:
    precoder: np.ndarray
    trace: np.ndarray
    iterations: int
    wall_time_s: float

    @property
    def sum_rate(self):
        return float(self.trace[-1, 0])


def solve_digital_mimo(h, budget, config=None):
    """Sum-rate precoding over the patch array with the same BCD blocks as
    the pattern solver; h is (K, M, 3, 3), precoder comes back (K, M, 3)."""
    config = config or SolverConfig()
    h = np.asarray(h)
    k_users, m_patches = h.shape[0], h.shape[1]
    rng = np.random.default_rng(config.seed)
    started = time.perf_counter()
    x, _, trace = _bcd(
        stacked_channel(h),
        budget.pt_a2,
        budget.sigma2,
        rng,
        config.max_iters,
        config.rel_tol,
        config.zeta_tol,
    )
    elapsed = time.perf_counter() - started
    return DigitalSolveResult(
        precoder=x.reshape(k_users, m_patches, 3),
        trace=trace,
        iterations=trace.shape[0],
        wall_time_s=elapsed,
    )


def interference_free_solve(scenario, config=None):
    """Relaxed solve with every cross-user term deleted from the loop.

    Runs on a fixed wide band (UPPER_BOUND_ORDER) so the figure is a
    truncation-insensitive ceiling for the joint designs. Returns the
    per-iteration (rate, surrogate, power) trace.
    """
    config = config or SolverConfig()
    grid = build_grid(scenario.aperture, scenario.grid_nx, scenario.grid_ny)
    channels = np.stack([channel_samples(u, grid, scenario.wave) for u in scenario.users])
    basis = FourierBasis(UPPER_BOUND_ORDER, scenario.aperture, grid)
    omega = basis.channel_spectrum(channels)

    rng = np.random.default_rng(config.seed)
    _, _, trace = _bcd(
        stacked_channel(omega),
        scenario.budget.pt_a2,
        scenario.budget.sigma2,
        rng,
        config.max_iters,
        config.rel_tol,
        config.zeta_tol,
        interference_free=True,
    )
    return trace


def interference_free_bound(scenario, config=None):
    """Sum rate of the interference-free relaxation."""
    return float(interference_free_solve(scenario, config)[-1, 0])
