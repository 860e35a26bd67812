"""Scenario configuration, figure sweeps, and machine-readable results.

Sweeps emit one ResultRow per (sweep point, scheme, seed). Scheme labels:

  pdm             band recomputed from the aperture and carrier
  pdm-nf9 / 81 / 225   band pinned to a fixed coefficient count
  mf              conjugate match filtering
  digital         half-wavelength patch array with the same BCD solver
  upper           interference-free relaxation

Geometry sweeps append "-L<height>" to the label so each transmitter-to-plane
distance plots as its own curve. A failed point keeps its row with the error
column set rather than aborting the sweep.
"""

import csv
import dataclasses
import json
import math
import time
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - python < 3.11
    import tomli as tomllib

from .baselines import digital_patch_setup, interference_free_solve, mf_design, solve_digital_mimo
from .emfield import Aperture, WaveParams, build_grid, channel_samples, green_free_space
from .errors import ConfigurationError
from .metrics import LinkBudget, sum_rate, transmit_power
from .solver import SolverConfig, run_pdm
from .wavenumber import TruncationOrder, truncation_order

_ON_PLANE_TOL = 1.0e-9

_PINNED_ORDERS = {
    "9": TruncationOrder(1, 1, 0),
    "81": TruncationOrder(4, 4, 0),
    "225": TruncationOrder(7, 7, 0),
}

DEFAULT_SEEDS = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class Scenario:
    """Full experiment description; frozen so sweep tasks can share it."""

    aperture: Aperture
    users: tuple
    wave: WaveParams
    budget: LinkBudget
    order: TruncationOrder
    grid_nx: int = 32
    grid_ny: int = 32
    seed: int = 1
    scheme: str = "pdm"

    def __post_init__(self):
        users = tuple(tuple(float(c) for c in u) for u in self.users)
        if not users:
            raise ConfigurationError("scenario needs at least one user")
        for k, u in enumerate(users):
            if len(u) != 3:
                raise ConfigurationError(f"user {k} position must be a 3-vector")
            cx, cy, cz = self.aperture.center
            on_plane = abs(u[2] - cz) < _ON_PLANE_TOL
            inside = (
                abs(u[0] - cx) <= self.aperture.lx / 2.0
                and abs(u[1] - cy) <= self.aperture.ly / 2.0
            )
            if on_plane and inside:
                raise ConfigurationError(f"user {k} lies on the aperture surface")
        object.__setattr__(self, "users", users)
        if self.order.nx < 1 or self.order.ny < 1:
            raise ConfigurationError("scenario band must keep at least one shell per axis")
        if self.grid_nx < 1 or self.grid_ny < 1:
            raise ConfigurationError("grid resolution must be >= 1 per axis")


_DEFAULT_USERS = (
    (1.0, 1.0, 30.0),
    (1.0, -1.0, 30.0),
    (-1.0, 1.0, 30.0),
    (-1.0, -1.0, 30.0),
    (5.0, 5.0, 30.0),
    (5.0, -5.0, 30.0),
    (-5.0, 5.0, 30.0),
    (-5.0, -5.0, 30.0),
)


def default_scenario():
    """Reference setup: 0.5 m square aperture at the origin, eight users 30 m
    out, 2.4 GHz carrier, 100 mA^2 budget, 5.6e-3 V^2/m^2 noise."""
    aperture = Aperture(0.5, 0.5)
    wave = WaveParams(f=2.4e9)
    return Scenario(
        aperture=aperture,
        users=_DEFAULT_USERS,
        wave=wave,
        budget=LinkBudget(pt_ma2=100.0, sigma2=5.6e-3),
        order=truncation_order(aperture, wave),
    )


def circle_users(radius, height, count=8):
    """count users evenly spaced on a circle of the given radius, parallel to
    the aperture plane at the given height."""
    angles = 2.0 * np.pi * np.arange(count) / count
    return tuple(
        (float(radius * np.cos(a)), float(radius * np.sin(a)), float(height)) for a in angles
    )


def random_scenario(seed, base=None):
    """Seeded user placement in the cylindrical volume R, L in [2, 30] m."""
    base = base or default_scenario()
    rng = np.random.default_rng(seed)
    count = len(base.users)
    radii = rng.uniform(2.0, 30.0, count)
    heights = rng.uniform(2.0, 30.0, count)
    angles = rng.uniform(0.0, 2.0 * np.pi, count)
    users = tuple(
        (float(r * np.cos(a)), float(r * np.sin(a)), float(h))
        for r, h, a in zip(radii, heights, angles)
    )
    return replace(base, users=users, seed=int(seed))


@dataclass(frozen=True)
class ResultRow:
    variable: str
    value: float
    scheme: str
    seed: int
    sum_rate_bps_hz: float
    iterations: int
    wall_time_s: float
    power_a2: float
    error: str = ""


_RESULT_FIELDS = [f.name for f in dataclasses.fields(ResultRow)]

_Task = namedtuple("_Task", "scenario scheme seed variable value solver")


def _order_for_scheme(base):
    if base.startswith("pdm-nf"):
        key = base[len("pdm-nf"):]
        if key not in _PINNED_ORDERS:
            raise ConfigurationError(f"unknown coefficient count in scheme '{base}'")
        return _PINNED_ORDERS[key]
    return None


def scheme_label(base, nf=None):
    """CLI-facing label: pdm plus an optional pinned coefficient count."""
    if base != "pdm" or nf in (None, "auto"):
        return base
    if str(nf) not in _PINNED_ORDERS:
        raise ConfigurationError(f"--nf must be one of 9, 81, 225, auto, got {nf}")
    return f"pdm-nf{nf}"


def _channel_stack(scenario, grid):
    return np.stack([channel_samples(u, grid, scenario.wave) for u in scenario.users])


def _run_point(task):
    """One (scenario, scheme, seed) solve; never raises, errors go in the row."""
    scenario, scheme, seed, variable, value, solver = task
    base = scheme.partition("-L")[0]
    started = time.perf_counter()
    try:
        if base == "mf":
            grid = build_grid(scenario.aperture, scenario.grid_nx, scenario.grid_ny)
            channels = _channel_stack(scenario, grid)
            theta, _ = mf_design(channels, grid, scenario.budget)
            rate = sum_rate(theta, channels, grid, scenario.budget)
            power = transmit_power(theta, grid)
            iterations = 1
        elif base == "digital":
            _, h, _ = digital_patch_setup(scenario)
            result = solve_digital_mimo(h, scenario.budget, replace(solver, seed=seed))
            rate, power = result.sum_rate, float(result.trace[-1, 2])
            iterations = result.iterations
        elif base == "upper":
            trace = interference_free_solve(scenario, replace(solver, seed=seed))
            rate, power = float(trace[-1, 0]), float(trace[-1, 2])
            iterations = trace.shape[0]
        elif base == "pdm" or base.startswith("pdm-nf"):
            config = replace(solver, seed=seed, order=_order_for_scheme(base))
            result = run_pdm(scenario, config)
            rate, power = result.sum_rate, result.power
            iterations = result.iterations
        else:
            raise ConfigurationError(f"unknown scheme '{scheme}'")
    except Exception as exc:  # noqa: BLE001 - per-row isolation is the contract
        return ResultRow(
            variable=variable,
            value=float(value),
            scheme=scheme,
            seed=int(seed),
            sum_rate_bps_hz=0.0,
            iterations=0,
            wall_time_s=time.perf_counter() - started,
            power_a2=0.0,
            error=f"{type(exc).__name__}: {exc}",
        )
    return ResultRow(
        variable=variable,
        value=float(value),
        scheme=scheme,
        seed=int(seed),
        sum_rate_bps_hz=float(rate),
        iterations=int(iterations),
        wall_time_s=time.perf_counter() - started,
        power_a2=float(power),
    )


def _execute(tasks, jobs):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_point, tasks))
    return [_run_point(t) for t in tasks]


def sweep_aperture(areas, schemes=("pdm", "mf", "upper"), seeds=DEFAULT_SEEDS, jobs=1,
                   solver=None, base=None):
    """Sum rate against aperture area (square kept square); the adaptive pdm
    scheme recomputes its band per area, pinned variants keep theirs."""
    base = base or default_scenario()
    solver = solver or SolverConfig()
    tasks = []
    for area in areas:
        side = math.sqrt(area)
        aperture = Aperture(side, side, base.aperture.center)
        scenario = replace(base, aperture=aperture, order=truncation_order(aperture, base.wave))
        for scheme in schemes:
            for seed in seeds:
                tasks.append(_Task(scenario, scheme, int(seed), "aperture_m2", float(area), solver))
    return _execute(tasks, jobs)


def sweep_power(powers_ma2, schemes=("pdm", "mf", "digital", "upper"), seeds=DEFAULT_SEEDS,
                jobs=1, solver=None, base=None):
    """Sum rate against the transmit power budget on the default geometry."""
    base = base or default_scenario()
    solver = solver or SolverConfig()
    tasks = []
    for power in powers_ma2:
        budget = LinkBudget(pt_ma2=float(power), sigma2=base.budget.sigma2)
        scenario = replace(base, budget=budget)
        for scheme in schemes:
            for seed in seeds:
                tasks.append(_Task(scenario, scheme, int(seed), "pt_ma2", float(power), solver))
    return _execute(tasks, jobs)


def sweep_geometry(radii, heights=(2.0, 5.0, 10.0, 30.0), schemes=("pdm",), seeds=DEFAULT_SEEDS,
                   jobs=1, solver=None, base=None):
    """Sum rate against the user-circle radius, one curve per plane height."""
    base = base or default_scenario()
    solver = solver or SolverConfig()
    tasks = []
    for radius in radii:
        for height in heights:
            scenario = replace(base, users=circle_users(radius, height, len(base.users)))
            for scheme in schemes:
                label = f"{scheme}-L{height:g}"
                for seed in seeds:
                    tasks.append(_Task(scenario, label, int(seed), "radius_m", float(radius), solver))
    return _execute(tasks, jobs)


def wavenumber_gain_study(distances=(0.1, 1.0, 10.0), freqs=(2.4e9,), half_length=0.5,
                          samples=4096, kx_points=601):
    """Normalized 1-D wavenumber spectrum of the channel for one on-axis user.

    The aperture is the x-axis segment |s_x| <= half_length; per (distance,
    frequency) the rows hold ||F(kx)||_F^2 in dB relative to its peak on
    kx/kappa0 in [-3, 3].
    """
    xs = -half_length + (np.arange(samples) + 0.5) * (2.0 * half_length / samples)
    s_points = np.zeros((samples, 3))
    s_points[:, 0] = xs
    weight = 2.0 * half_length / samples
    ratios = np.linspace(-3.0, 3.0, kx_points)

    rows = []
    for freq in freqs:
        wave = WaveParams(f=float(freq))
        for dist in distances:
            g = green_free_space(np.array([0.0, 0.0, float(dist)]), s_points, wave)
            phases = np.exp(-1j * (ratios * wave.kappa0)[:, None] * xs[None, :]) * weight
            spectrum = np.einsum("ci,iab->cab", phases, g)
            gains = np.sum(np.abs(spectrum) ** 2, axis=(1, 2))
            gain_db = 10.0 * np.log10(gains / gains.max())
            for ratio, db in zip(ratios, gain_db):
                rows.append(
                    {
                        "freq_ghz": float(freq) / 1.0e9,
                        "distance_m": float(dist),
                        "kx_over_k0": float(ratio),
                        "gain_db": float(db),
                    }
                )
    return rows


def _row_dict(row):
    if dataclasses.is_dataclass(row) and not isinstance(row, type):
        return dataclasses.asdict(row)
    return dict(row)


def emit_results(rows, path, format="csv", fieldnames=None):
    """Write rows (dataclasses or dicts) as CSV or JSON lines.

    Empty sweeps still produce a header (CSV) or an empty file (jsonl) so
    downstream tools can distinguish "ran, no rows" from "missing".
    """
    records = [_row_dict(r) for r in rows]
    if fieldnames is None:
        fieldnames = list(records[0].keys()) if records else list(_RESULT_FIELDS)
    try:
        if format == "csv":
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.DictWriter(fh, fieldnames=fieldnames)
                writer.writeheader()
                writer.writerows(records)
        elif format == "jsonl":
            with open(path, "w", encoding="utf-8") as fh:
                for record in records:
                    fh.write(json.dumps(record) + "\n")
        else:
            raise ConfigurationError(f"unknown output format '{format}'")
    except OSError as exc:
        raise OSError(f"could not write results to {path}: {exc}") from exc
    return path


def _coerce(text):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def parse_results(path, format=None):
    """Read emit_results output back as a list of dicts with numeric fields
    restored (CSV carries no types, so ints and floats are re-inferred)."""
    if format is None:
        format = "jsonl" if str(path).endswith(".jsonl") else "csv"
    try:
        if format == "csv":
            with open(path, newline="", encoding="utf-8") as fh:
                return [
                    {key: _coerce(val) for key, val in row.items()}
                    for row in csv.DictReader(fh)
                ]
        if format == "jsonl":
            with open(path, encoding="utf-8") as fh:
                return [json.loads(line) for line in fh if line.strip()]
    except OSError as exc:
        raise OSError(f"could not read results from {path}: {exc}") from exc
    raise ConfigurationError(f"unknown input format '{format}'")


def pattern_rows(patterns, grid):
    """Flatten optimized patterns to plot-ready rows.

    Columns: user, grid indices, position, raw complex components, plus the
    x-component amplitude normalized to each user's own peak and its phase.
    nx, ny travel with every row so a plotter can reshape without guessing.
    """
    patterns = np.asarray(patterns)
    if patterns.ndim == 2:
        patterns = patterns[None]
    rows = []
    ix = np.arange(grid.count) % grid.nx
    iy = np.arange(grid.count) // grid.nx
    for k, theta in enumerate(patterns):
        amp_x = np.abs(theta[:, 0])
        peak = amp_x.max()
        scale = 1.0 / peak if peak > 0.0 else 1.0
        for i in range(grid.count):
            rows.append(
                {
                    "user": k,
                    "ix": int(ix[i]),
                    "iy": int(iy[i]),
                    "s_x_m": float(grid.points[i, 0]),
                    "s_y_m": float(grid.points[i, 1]),
                    "re_x": float(theta[i, 0].real),
                    "im_x": float(theta[i, 0].imag),
                    "re_y": float(theta[i, 1].real),
                    "im_y": float(theta[i, 1].imag),
                    "re_z": float(theta[i, 2].real),
                    "im_z": float(theta[i, 2].imag),
                    "amp_x_norm": float(amp_x[i] * scale),
                    "phase_x_rad": float(np.angle(theta[i, 0])),
                    "nx": grid.nx,
                    "ny": grid.ny,
                }
            )
    return rows


def dump_patterns(patterns, grid, path, format="csv"):
    """Write pattern_rows to disk; one row per (user, grid point)."""
    return emit_results(pattern_rows(patterns, grid), path, format=format)


_CONFIG_DEFAULTS = {
    "freq_ghz": 2.4,
    "pt_ma2": 100.0,
    "sigma2_v2m2": 5.6e-3,
    "lx_m": 0.5,
    "ly_m": 0.5,
    "grid_nx": 32,
    "grid_ny": 32,
    "users": [list(u) for u in _DEFAULT_USERS],
    "seed": 1,
    "scheme": "pdm",
    "max_iters": 500,
    "rel_tol": 1.0e-5,
    "zeta_tol": 1.0e-10,
}


def load_config(path):
    """Read a TOML experiment config; unknown keys are rejected by name."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"could not read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"invalid TOML in {path}: {exc}") from exc
    unknown = sorted(set(raw) - set(_CONFIG_DEFAULTS))
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(unknown)}")
    merged = dict(_CONFIG_DEFAULTS)
    merged.update(raw)
    return merged


def scenario_from_config(config):
    """Build the Scenario described by a merged config dict."""
    aperture = Aperture(float(config["lx_m"]), float(config["ly_m"]))
    wave = WaveParams(f=float(config["freq_ghz"]) * 1.0e9)
    return Scenario(
        aperture=aperture,
        users=tuple(tuple(u) for u in config["users"]),
        wave=wave,
        budget=LinkBudget(pt_ma2=float(config["pt_ma2"]), sigma2=float(config["sigma2_v2m2"])),
        order=truncation_order(aperture, wave),
        grid_nx=int(config["grid_nx"]),
        grid_ny=int(config["grid_ny"]),
        seed=int(config["seed"]),
        scheme=str(config["scheme"]),
    )


def solver_from_config(config):
    """SolverConfig portion of a merged config dict."""
    return SolverConfig(
        max_iters=int(config["max_iters"]),
        rel_tol=float(config["rel_tol"]),
        zeta_tol=float(config["zeta_tol"]),
        seed=int(config["seed"]),
    )
