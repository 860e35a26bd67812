"""Physical constants, aperture quadrature, and dyadic Green-function kernels.

The transmitter is a planar rectangular aperture with normal +z. Every
integral over the aperture is realized as a midpoint-rule quadrature on a
uniform nx-by-ny grid, which is exact for constants and spectrally accurate
for the smooth integrands used here.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, SingularityError

C_LIGHT = 299_792_458.0
"""Propagation speed in vacuum, m/s."""

Z0_FREE_SPACE = 376.73
"""Intrinsic impedance of free space, ohm."""

MIN_SEPARATION = 1.0e-9
"""Reject kernel evaluations below this source-observer distance (m)."""

_I3 = np.eye(3)


@dataclass(frozen=True)
class WaveParams:
    """Carrier frequency and the derived propagation constants.

    kappa0 is always 2*pi*f/c; it is computed at construction and never
    accepted from the caller.
    """

    f: float
    c: float = C_LIGHT
    Z0: float = Z0_FREE_SPACE
    kappa0: float = field(init=False)

    def __post_init__(self):
        if self.f <= 0.0:
            raise ConfigurationError(f"carrier frequency must be positive, got {self.f}")
        if self.c <= 0.0 or self.Z0 <= 0.0:
            raise ConfigurationError("propagation speed and impedance must be positive")
        object.__setattr__(self, "kappa0", 2.0 * np.pi * self.f / self.c)

    @property
    def wavelength(self):
        return self.c / self.f


@dataclass(frozen=True)
class Aperture:
    """Planar rectangular aperture, sides lx, ly (m), normal +z."""

    lx: float
    ly: float
    center: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if self.lx <= 0.0 or self.ly <= 0.0:
            raise ConfigurationError(
                f"aperture sides must be positive, got lx={self.lx}, ly={self.ly}"
            )
        if len(self.center) != 3:
            raise ConfigurationError("aperture center must be a 3-vector")
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))

    @property
    def area(self):
        return self.lx * self.ly


@dataclass
class QuadratureGrid:
    """Sampled aperture points with midpoint-rule weights.

    points has shape (I_s, 3), weights shape (I_s,); sum(weights) equals the
    aperture area. nx, ny record the grid shape for consumers that need to
    reassemble 2-D fields (pattern dumps, refinement loops).
    """

    points: np.ndarray
    weights: np.ndarray
    nx: int
    ny: int

    @property
    def count(self):
        return self.points.shape[0]


def build_grid(aperture, nx, ny):
    """Uniform midpoint-rule grid on the aperture; weight A_T/(nx*ny) per cell."""
    if nx < 1 or ny < 1:
        raise ConfigurationError(f"grid resolution must be >= 1, got nx={nx}, ny={ny}")
    cx, cy, cz = aperture.center
    xs = cx - aperture.lx / 2.0 + (np.arange(nx) + 0.5) * (aperture.lx / nx)
    ys = cy - aperture.ly / 2.0 + (np.arange(ny) + 0.5) * (aperture.ly / ny)
    gx, gy = np.meshgrid(xs, ys)  # row-major: y outer, x inner
    points = np.column_stack([gx.ravel(), gy.ravel(), np.full(nx * ny, cz)])
    weights = np.full(nx * ny, aperture.area / (nx * ny))
    return QuadratureGrid(points=points, weights=weights, nx=int(nx), ny=int(ny))


def integrate(values, grid):
    """Quadrature sum over the grid: sum_i weight_i * values_i.

    values may be scalar per point, or any array per point (leading axis I_s);
    the weighted reduction runs over that leading axis.
    """
    values = np.asarray(values)
    if values.shape[0] != grid.count:
        raise ConfigurationError(
            f"field has {values.shape[0]} samples, grid has {grid.count} points"
        )
    return np.tensordot(grid.weights, values, axes=(0, 0))


def green_free_space(r, s, wave):
    """Free-space dyadic kernel from source point(s) s to observer r.

    Returns (j*kappa0*Z0/4pi) * (e^{j*kappa0*d}/d) * (I3 - dd^T/d^2) with
    d = r - s. s may be a single 3-vector or an (..., 3) batch; the result has
    shape (..., 3, 3). The output is complex-symmetric and annihilates the
    radial direction.
    """
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    d = r - s
    dist = np.linalg.norm(d, axis=-1)
    if np.any(dist < MIN_SEPARATION):
        raise SingularityError(
            f"observer within {MIN_SEPARATION} m of a source point; kernel is singular"
        )
    scale = (1j * wave.kappa0 * wave.Z0 / (4.0 * np.pi)) * np.exp(1j * wave.kappa0 * dist) / dist
    outer = d[..., :, None] * d[..., None, :] / (dist * dist)[..., None, None]
    return scale[..., None, None] * (_I3 - outer)


def green_far_field(r, s, wave):
    """Far-field form of the kernel: transverse projector at r times a plane-wave
    phase e^{-j kappa . s} with kappa = kappa0 * r/||r||.

    Valid when ||r|| is much larger than both ||s|| and the Fresnel length;
    the caller is responsible for that regime. s may be batched (..., 3).
    """
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    rnorm = float(np.linalg.norm(r))
    if rnorm < MIN_SEPARATION:
        raise SingularityError("far-field kernel undefined at the origin")
    kvec = wave.kappa0 * r / rnorm
    proj = _I3 - np.outer(r, r) / (rnorm * rnorm)
    scale = (1j * wave.kappa0 * wave.Z0 / (4.0 * np.pi)) * np.exp(1j * wave.kappa0 * rnorm) / rnorm
    phase = np.exp(-1j * (s @ kvec))
    return (scale * phase)[..., None, None] * proj


def channel_samples(user_pos, grid, wave):
    """Free-space kernel sampled at every grid point: shape (I_s, 3, 3)."""
    return green_free_space(np.asarray(user_pos, dtype=float), grid.points, wave)
