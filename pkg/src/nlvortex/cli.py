"""Command-line driver: ``run``, ``fringes``, ``modes`` and ``check``.

Exit codes: 0 success, 1 invariant failure, 2 config error, 3 IO error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .io import ConfigError, _write_scan, export_field, format_summary, load_config, run_experiment
from .modes import POSITION, WAVEVECTOR, Axis, BeamParams, LGIndex, ModeIndex, dhg_field, hg_field, lg_field

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


def _cmd_run(args) -> int:
    config = load_config(args.config)
    report = run_experiment(config)
    sys.stdout.write(format_summary(report.summary))
    return EXIT_OK if report.passed else EXIT_INVARIANT


def _cmd_fringes(args) -> int:
    from .biphoton import apply_nonlocal_converter, build_state
    from .vortex import SlitSpec, double_slit_fringes, fringe_shift

    config = load_config(args.config)
    if config.slits is None:
        raise ConfigError("fringes needs a slits.* section")
    state = apply_nonlocal_converter(build_state(config.pump, config.crystal, config.axis()))
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    slits = SlitSpec(config.slits.separation, config.slits.width, config.slits.orientation)
    for x2 in config.detector2_positions:
        plus = double_slit_fringes(state, slits, x2)
        minus = double_slit_fringes(state, slits, -x2)
        path = out / f"fringes_{slits.orientation}_d2_{x2:.17g}.csv"
        _write_scan(path, [plus, minus])
        print(f"fringes.{slits.orientation}_plane.d2_{x2:.17g}.shift_rad = {fringe_shift(plus, minus):.17g}")
    return EXIT_OK


def _cmd_modes(args) -> int:
    params = BeamParams(args.wavelength, args.waist)
    axis = Axis.centered(args.representation, params.waist, args.half_width, args.samples)
    grid = (axis, axis)
    idx = ModeIndex(args.n, args.m)
    if args.kind == "hg":
        field = hg_field(idx, params, grid)
    elif args.kind == "dhg":
        field = dhg_field(idx, params, grid)
    else:
        field = lg_field(LGIndex.from_mode_index(idx), params, grid)
    base = args.out or f"{args.kind}_{args.n}_{args.m}"
    for path in export_field(field, base):
        print(path)
    return EXIT_OK


def _cmd_check(args) -> int:
    from .checks import run_checks

    results = run_checks()
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlvortex", description="Non-local optical vortex simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a full experiment from a config file")
    p.add_argument("config")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("fringes", help="double-slit fringe scans only")
    p.add_argument("config")
    p.set_defaults(func=_cmd_fringes)

    p = sub.add_parser("modes", help="export a single mode field")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--kind", choices=("hg", "lg", "dhg"), default="hg")
    p.add_argument("--wavelength", type=float, default=810e-9, help="metres")
    p.add_argument("--waist", type=float, default=1e-3, help="metres")
    p.add_argument("--samples", type=int, default=257)
    p.add_argument("--half-width", type=float, default=6.0, help="in waists")
    p.add_argument("--representation", choices=(POSITION, WAVEVECTOR), default=POSITION)
    p.add_argument("--out", help="output basename")
    p.set_defaults(func=_cmd_modes)

    p = sub.add_parser("check", help="run the oracle and invariant suite")
    p.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
