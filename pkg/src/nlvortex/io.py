"""Experiment configuration, field export, and the end-to-end experiment run.

Configs are flat ``key = value`` text with dotted section keys and SI units
named in the key, e.g.::

    pump.n = 1
    pump.m = 0
    pump.wavelength_m = 4.05e-07
    pump.waist_m = 0.001
    crystal.length_m = 0.002
    crystal.phase_matching = gaussian_approx
    grid.samples = 257
    grid.half_width_waists = 6
    slits.separation_waists = 1.0
    slits.width_waists = 0.2
    detector2.positions_waists = 0.5
    output.dir = out/hg10

Each detector-2 entry ``x`` is measured as the symmetric pair ``(+x, -x)``.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from math import pi
from pathlib import Path

import numpy as np

from .biphoton import (
    BiphotonState,
    CrystalSpec,
    PumpSpec,
    apply_nonlocal_converter,
    build_state,
    coincidence_map,
    default_axis,
    full_4d_crosscheck,
)
from .modes import Axis, Field2D, ModeIndex
from .vortex import (
    SlitSpec,
    WindingError,
    double_slit_fringes,
    expected_fringe_shift,
    fringe_shift,
    phase_distance,
    sample,
    winding,
)

FLOAT_FORMAT = "%.17g"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    pump: PumpSpec
    crystal: CrystalSpec
    samples: int = 257
    half_width: float = 6.0
    slits: SlitSpec | None = field(default_factory=SlitSpec)
    detector2_positions: tuple = (0.5,)
    output_dir: Path = Path("nlvortex-out")

    def axis(self) -> Axis:
        return default_axis(self.pump, self.samples, self.half_width)


_KEYS = {
    "pump.n": int,
    "pump.m": int,
    "pump.wavelength_m": float,
    "pump.waist_m": float,
    "crystal.length_m": float,
    "crystal.phase_matching": str,
    "grid.samples": int,
    "grid.half_width_waists": float,
    "slits.separation_waists": float,
    "slits.width_waists": float,
    "slits.orientation": str,
    "detector2.positions_waists": str,
    "output.dir": str,
}
_REQUIRED = ("pump.n", "pump.m", "pump.wavelength_m", "pump.waist_m", "crystal.length_m")


def _parse_pairs(text: str) -> dict:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            raw[key] = _KEYS[key](value)
        except ValueError:
            raise ConfigError(f"{key}: cannot parse {value!r} as {_KEYS[key].__name__}") from None
    return raw


def parse_config(text: str) -> ExperimentConfig:
    raw = _parse_pairs(text)
    missing = [k for k in _REQUIRED if k not in raw]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    try:
        pump = PumpSpec(ModeIndex(raw["pump.n"], raw["pump.m"]), raw["pump.wavelength_m"], raw["pump.waist_m"])
    except ValueError as exc:
        raise ConfigError(f"pump: {exc}") from None
    try:
        crystal = CrystalSpec(raw["crystal.length_m"], raw.get("crystal.phase_matching", "gaussian_approx"))
    except ValueError as exc:
        raise ConfigError(f"crystal: {exc}") from None
    slits = None
    if any(k.startswith("slits.") for k in raw):
        try:
            slits = SlitSpec(
                raw.get("slits.separation_waists", 1.0),
                raw.get("slits.width_waists", 0.2),
                raw.get("slits.orientation", "x"),
            )
        except ValueError as exc:
            raise ConfigError(f"slits: {exc}") from None
    positions = (0.5,)
    if "detector2.positions_waists" in raw:
        try:
            positions = tuple(float(v) for v in raw["detector2.positions_waists"].split(",") if v.strip())
        except ValueError:
            raise ConfigError("detector2.positions_waists: expected comma-separated numbers") from None
    samples = raw.get("grid.samples", 257)
    if samples < 2:
        raise ConfigError(f"grid.samples: need at least 2, got {samples}")
    half_width = raw.get("grid.half_width_waists", 6.0)
    if not half_width > 0:
        raise ConfigError(f"grid.half_width_waists: must be positive, got {half_width}")
    return ExperimentConfig(
        pump=pump,
        crystal=crystal,
        samples=samples,
        half_width=half_width,
        slits=slits,
        detector2_positions=positions,
        output_dir=Path(raw.get("output.dir", "nlvortex-out")),
    )


def format_config(config: ExperimentConfig) -> str:
    def num(x):
        return repr(float(x))

    lines = [
        f"pump.n = {config.pump.mode.n}",
        f"pump.m = {config.pump.mode.m}",
        f"pump.wavelength_m = {num(config.pump.wavelength)}",
        f"pump.waist_m = {num(config.pump.waist)}",
        f"crystal.length_m = {num(config.crystal.length)}",
        f"crystal.phase_matching = {config.crystal.phase_matching}",
        f"grid.samples = {config.samples}",
        f"grid.half_width_waists = {num(config.half_width)}",
    ]
    if config.slits is not None:
        lines += [
            f"slits.separation_waists = {num(config.slits.separation)}",
            f"slits.width_waists = {num(config.slits.width)}",
            f"slits.orientation = {config.slits.orientation}",
        ]
    lines.append("detector2.positions_waists = " + ", ".join(num(p) for p in config.detector2_positions))
    lines.append(f"output.dir = {config.output_dir}")
    return "\n".join(lines) + "\n"


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


# -- export ------------------------------------------------------------------


def _write_pgm(path: Path, image: np.ndarray) -> None:
    height, width = image.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(image.astype(np.uint8).tobytes())


def _to_image(values: np.ndarray) -> np.ndarray:
    # rows run down axis_b (largest first), columns along axis_a
    return np.flipud(values.T)


def export_field(field: Field2D, basename) -> list[Path]:
    """Write ``<basename>.csv``, ``<basename>_intensity.pgm`` and ``<basename>_phase.pgm``."""
    basename = Path(basename)
    paths = [
        basename.with_name(basename.name + ".csv"),
        basename.with_name(basename.name + "_intensity.pgm"),
        basename.with_name(basename.name + "_phase.pgm"),
    ]
    a, b = np.meshgrid(field.axis_a.coords, field.axis_b.coords, indexing="ij")
    values = field.values.astype(complex)
    table = np.column_stack([a.ravel(), b.ravel(), values.real.ravel(), values.imag.ravel()])
    intensity = np.abs(values) ** 2
    peak = intensity.max()
    gray = np.rint(255.0 * intensity / peak) if peak > 0 else np.zeros_like(intensity)
    phase = np.rint((np.angle(values) + pi) / (2.0 * pi) * 255.0)
    try:
        paths[0].parent.mkdir(parents=True, exist_ok=True)
        header = f"{field.axis_a.kind}_a,{field.axis_b.kind}_b,real,imag"
        np.savetxt(paths[0], table, fmt=FLOAT_FORMAT, delimiter=",", header=header, comments="")
        _write_pgm(paths[1], _to_image(gray))
        _write_pgm(paths[2], _to_image(phase))
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write field export: {exc.strerror}", str(exc.filename)) from None
    return paths


def read_field_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read an exported table back as ``(coords_a, coords_b, values)``."""
    table = np.loadtxt(path, delimiter=",", skiprows=1)
    coords_a = np.unique(table[:, 0])
    coords_b = np.unique(table[:, 1])
    values = (table[:, 2] + 1j * table[:, 3]).reshape(coords_a.size, coords_b.size)
    return coords_a, coords_b, values


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError(f"{path} is not a binary graymap")
    width, height = (int(v) for v in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(height, width)


# -- experiment --------------------------------------------------------------


@dataclass
class ExperimentReport:
    summary: dict
    files: list

    @property
    def passed(self) -> bool:
        return all(v == "pass" for k, v in self.summary.items() if k.startswith("check."))


NORM_TOL = 1e-6
CONVERTER_NORM_TOL = 1e-8
CROSSCHECK_TOL = 1e-6
DARK_CORE_TOL = 1e-10
SHIFT_TOL = 0.05
WINDING_RADIUS_WAISTS = 1.0
CROSSCHECK_SAMPLES = 24


def _fmt(x) -> str:
    if isinstance(x, float):
        return FLOAT_FORMAT % x
    return str(x)


def format_summary(summary: dict) -> str:
    return "".join(f"{k} = {_fmt(v)}\n" for k, v in summary.items())


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def _write_scan(path: Path, scans) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["position"] + [f"counts_d2={FLOAT_FORMAT % s.detector2_position}" for s in scans])
        for i, u in enumerate(scans[0].positions):
            writer.writerow([FLOAT_FORMAT % u] + [FLOAT_FORMAT % s.counts[i] for s in scans])


def _fringe_results(state: BiphotonState, config: ExperimentConfig, out: Path, summary: dict, files: list) -> None:
    orders = {"x": config.pump.mode.n, "y": config.pump.mode.m}
    base = config.slits
    for plane in ("x", "y"):
        slits = SlitSpec(base.separation, base.width, plane)
        for x2 in config.detector2_positions:
            key = f"fringes.{plane}_plane.d2_{FLOAT_FORMAT % x2}"
            try:
                plus = double_slit_fringes(state, slits, x2)
                minus = double_slit_fringes(state, slits, -x2)
                shift = fringe_shift(plus, minus)
            except ValueError as exc:
                summary[key + ".error"] = str(exc)
                summary[f"check.{key}"] = "fail"
                continue
            path = out / f"fringes_{plane}_d2_{FLOAT_FORMAT % x2}.csv"
            _write_scan(path, [plus, minus])
            files.append(path)
            expected = expected_fringe_shift(orders[plane], x2, slits)
            summary[key + ".shift_rad"] = shift
            summary[key + ".expected_rad"] = expected
            summary[f"check.{key}"] = _verdict(phase_distance(shift, expected) < SHIFT_TOL)


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Build, convert and analyse one pump configuration; write every artifact.

    The summary's ``check.*`` entries record each tolerance test; the run
    passes only if all of them pass.
    """
    out = Path(config.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot create output directory: {exc.strerror}", str(out)) from None
    if not os.access(out, os.W_OK):
        raise PermissionError(13, "output directory is not writable", str(out))

    pump, crystal = config.pump, config.crystal
    summary: dict = {
        "pump.n": pump.mode.n,
        "pump.m": pump.mode.m,
        "down.wavelength_m": 2.0 * pump.wavelength,
        "down.waist_m": float(np.sqrt(2.0) * pump.waist),
    }
    files: list = []

    state = build_state(pump, crystal, config.axis())
    converted = apply_nonlocal_converter(state)
    summary["phase_matching.sigma_fit_m"] = state.sigma_fit

    for plane, order in (("x", pump.mode.n), ("y", pump.mode.m)):
        before = state.factor(plane)
        after = converted.factor(plane)
        files += export_field(coincidence_map(state, plane), out / f"coincidence_{plane}_before")
        files += export_field(coincidence_map(converted, plane), out / f"coincidence_{plane}_after")
        summary[f"norm.{plane}_plane.before"] = before.norm()
        summary[f"norm.{plane}_plane.after"] = after.norm()
        summary[f"check.norm.{plane}_plane"] = _verdict(abs(before.norm() - 1.0) < NORM_TOL)
        summary[f"check.converter_norm.{plane}_plane"] = _verdict(
            abs(after.norm() - before.norm()) < CONVERTER_NORM_TOL
        )
        try:
            w = winding(after, WINDING_RADIUS_WAISTS * converted.down_params.waist)
            summary[f"winding.{plane}_plane"] = w.number
            summary[f"winding.{plane}_plane.residual"] = w.residual
            ok = w.number == order and w.residual < SHIFT_TOL
        except WindingError as exc:
            summary[f"winding.{plane}_plane.error"] = str(exc)
            ok = False
        summary[f"check.winding.{plane}_plane"] = _verdict(ok)
        if order >= 1:
            cmap = coincidence_map(converted, plane)
            origin = float(sample(cmap, np.array([0.0]), np.array([0.0]))[0])
            ratio = abs(origin) / float(cmap.values.max())
            summary[f"doughnut.{plane}_plane.origin_over_peak"] = ratio
            summary[f"check.doughnut.{plane}_plane"] = _verdict(ratio < DARK_CORE_TOL)

    if config.slits is not None:
        _fringe_results(converted, config, out, summary, files)

    residual = full_4d_crosscheck(pump, CrystalSpec(crystal.length), CROSSCHECK_SAMPLES, config.half_width)
    summary["crosscheck.residual"] = residual
    summary["check.crosscheck"] = _verdict(residual < CROSSCHECK_TOL)

    summary["result"] = "pass" if all(v == "pass" for k, v in summary.items() if k.startswith("check.")) else "fail"
    report_path = out / "summary.txt"
    winding_path = out / "winding.txt"
    try:
        report_path.write_text(format_summary(summary))
        winding_path.write_text(
            format_summary({k: v for k, v in summary.items() if k.startswith(("winding.", "check.winding."))})
        )
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write summary: {exc.strerror}", str(exc.filename)) from None
    files += [winding_path, report_path]
    return ExperimentReport(summary, files)
