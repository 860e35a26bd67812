"""Command-line front end for the experiment sweeps.

Exit codes: 0 all rows succeeded, 2 at least one row carries an error,
1 configuration problems (bad flags, bad config file, unwritable output).
"""

import argparse
import sys
from dataclasses import replace

from .baselines import mf_design
from .emfield import build_grid
from .errors import ConfigurationError
from .experiments import (
    DEFAULT_SEEDS,
    _channel_stack,
    _run_point,
    _Task,
    default_scenario,
    dump_patterns,
    emit_results,
    load_config,
    scenario_from_config,
    scheme_label,
    solver_from_config,
    sweep_aperture,
    sweep_geometry,
    sweep_power,
    wavenumber_gain_study,
)
from .solver import SolverConfig, run_pdm

_POWER_DEFAULT = "100,177.8,316.2,562.3,1000"
_AREA_DEFAULT = "0.1,0.25,0.5,0.75,1.0"
_RADII_DEFAULT = "2,5,10,20,30"
_HEIGHTS_DEFAULT = "2,5,10,30"


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems; those are config errors here.
    def error(self, message):
        raise ConfigurationError(message)


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"expected comma-separated numbers, got '{text}'") from exc


def _ints(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"expected comma-separated integers, got '{text}'") from exc


def _add_common(sub, with_schemes=True):
    sub.add_argument("--config", help="TOML scenario/solver config")
    sub.add_argument("--out", help="output path (default <subcommand>.<format>)")
    sub.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    if with_schemes:
        sub.add_argument("--scheme", action="append",
                         help="scheme label, repeatable or comma-separated")
        sub.add_argument("--seeds", default=None, help="comma-separated seed list")
        sub.add_argument("--nf", choices=("9", "81", "225", "auto"), default="auto",
                         help="pin the pdm coefficient count")
        sub.add_argument("--jobs", type=int, default=1, help="parallel sweep points")
        sub.add_argument("--serial", action="store_true",
                         help="force single-process execution (bit-exact runs)")


def _build_parser():
    parser = _Parser(prog="capmimo", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    sweep_ap = subs.add_parser("sweep-aperture", help="sum rate vs aperture area")
    sweep_ap.add_argument("--areas", default=_AREA_DEFAULT, help="areas in m^2")
    _add_common(sweep_ap)

    sweep_pw = subs.add_parser("sweep-power", help="sum rate vs power budget")
    sweep_pw.add_argument("--powers", default=_POWER_DEFAULT, help="budgets in mA^2")
    _add_common(sweep_pw)

    sweep_geo = subs.add_parser("sweep-geometry", help="sum rate vs user-circle radius")
    sweep_geo.add_argument("--radii", default=_RADII_DEFAULT, help="circle radii in m")
    sweep_geo.add_argument("--heights", default=_HEIGHTS_DEFAULT, help="plane heights in m")
    _add_common(sweep_geo)

    gain = subs.add_parser("wavenumber-gain", help="1-D channel spectrum study")
    gain.add_argument("--distances", default="0.1,1,10", help="user distances in m")
    gain.add_argument("--freqs", default="2.4", help="carriers in GHz")
    _add_common(gain, with_schemes=False)

    solve = subs.add_parser("solve", help="single scenario, one scheme")
    _add_common(solve)

    dump = subs.add_parser("dump-patterns", help="optimized pattern fields per grid point")
    _add_common(dump)

    return parser


def _schemes(args, defaults):
    if not args.scheme:
        labels = list(defaults)
    else:
        labels = [part for entry in args.scheme for part in entry.split(",") if part]
    return [scheme_label(label, args.nf) for label in labels]


def _seeds(args):
    return tuple(_ints(args.seeds)) if args.seeds else DEFAULT_SEEDS


def _jobs(args):
    return 1 if args.serial else max(1, args.jobs)


def _load(args):
    config = load_config(args.config) if args.config else None
    scenario = scenario_from_config(config) if config else default_scenario()
    solver = solver_from_config(config) if config else SolverConfig()
    return scenario, solver


def _out_path(args):
    return args.out or f"{args.command.replace('-', '_')}.{args.format}"


def _emit_and_report(rows, args):
    path = emit_results(rows, _out_path(args), format=args.format)
    failed = [r for r in rows if getattr(r, "error", "")]
    print(f"wrote {len(rows)} rows to {path}")
    for row in failed:
        print(f"failed: {row.scheme} at {row.variable}={row.value}: {row.error}",
              file=sys.stderr)
    return 2 if failed else 0


def _cmd_sweep_aperture(args):
    scenario, solver = _load(args)
    rows = sweep_aperture(
        _floats(args.areas),
        schemes=_schemes(args, ("pdm", "mf", "upper")),
        seeds=_seeds(args),
        jobs=_jobs(args),
        solver=solver,
        base=scenario,
    )
    return _emit_and_report(rows, args)


def _cmd_sweep_power(args):
    scenario, solver = _load(args)
    rows = sweep_power(
        _floats(args.powers),
        schemes=_schemes(args, ("pdm", "mf", "digital", "upper")),
        seeds=_seeds(args),
        jobs=_jobs(args),
        solver=solver,
        base=scenario,
    )
    return _emit_and_report(rows, args)


def _cmd_sweep_geometry(args):
    scenario, solver = _load(args)
    rows = sweep_geometry(
        _floats(args.radii),
        heights=tuple(_floats(args.heights)),
        schemes=_schemes(args, ("pdm",)),
        seeds=_seeds(args),
        jobs=_jobs(args),
        solver=solver,
        base=scenario,
    )
    return _emit_and_report(rows, args)


def _cmd_wavenumber_gain(args):
    rows = wavenumber_gain_study(
        distances=tuple(_floats(args.distances)),
        freqs=tuple(f * 1.0e9 for f in _floats(args.freqs)),
    )
    emit_results(rows, _out_path(args), format=args.format,
                 fieldnames=list(rows[0].keys()))
    print(f"wrote {len(rows)} rows to {_out_path(args)}")
    return 0


def _cmd_solve(args):
    scenario, solver = _load(args)
    schemes = _schemes(args, (scenario.scheme,))
    rows = []
    for scheme in schemes:
        for seed in _seeds(args):
            rows.append(_run_point(_Task(scenario, scheme, seed, "pt_ma2",
                                         scenario.budget.pt_ma2, solver)))
    best = max((r for r in rows if not r.error), key=lambda r: r.sum_rate_bps_hz, default=None)
    if args.out:
        emit_results(rows, args.out, format=args.format)
    if best is None:
        print("all runs failed", file=sys.stderr)
        return 2
    print(f"scheme={best.scheme} seed={best.seed} sum_rate={best.sum_rate_bps_hz:.4f} "
          f"iterations={best.iterations} power_a2={best.power_a2:.6e}")
    return 2 if any(r.error for r in rows) else 0


def _cmd_dump_patterns(args):
    scenario, solver = _load(args)
    schemes = _schemes(args, ("pdm",))
    if len(schemes) != 1:
        raise ConfigurationError("dump-patterns takes exactly one scheme")
    scheme = schemes[0]
    grid = build_grid(scenario.aperture, scenario.grid_nx, scenario.grid_ny)
    if scheme == "mf":
        channels = _channel_stack(scenario, grid)
        patterns, _ = mf_design(channels, grid, scenario.budget)
    elif scheme.startswith("pdm"):
        from .experiments import _order_for_scheme

        order = _order_for_scheme(scheme)
        best = None
        for seed in _seeds(args):
            result = run_pdm(scenario, replace(solver, seed=seed, order=order))
            if best is None or result.sum_rate > best.sum_rate:
                best = result
        patterns = best.patterns
    else:
        raise ConfigurationError(f"dump-patterns supports pdm and mf, not '{scheme}'")
    path = dump_patterns(patterns, grid, _out_path(args), format=args.format)
    print(f"wrote {len(scenario.users) * grid.count} rows to {path}")
    return 0


_COMMANDS = {
    "sweep-aperture": _cmd_sweep_aperture,
    "sweep-power": _cmd_sweep_power,
    "sweep-geometry": _cmd_sweep_geometry,
    "wavenumber-gain": _cmd_wavenumber_gain,
    "solve": _cmd_solve,
    "dump-patterns": _cmd_dump_patterns,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except (ConfigurationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
