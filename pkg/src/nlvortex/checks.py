"""Oracle and invariant checks behind ``nlvortex check``.

Each check compares two independent routes (closed form vs. numerical
overlap, analytic transform vs. matrix DFT, direct 4D vs. factor product)
and reports the worst deviation against a fixed tolerance.
"""

from __future__ import annotations

import tempfile
import time
from dataclasses import dataclass
from math import pi
from pathlib import Path

import numpy as np

from .algebra import (
    decompose,
    dhg_expansion,
    fourier_transform,
    lg_expansion,
    lg_index,
    mode_converter_phases,
)
from .biphoton import (
    CrystalSpec,
    PumpSpec,
    apply_nonlocal_converter,
    build_state,
    coincidence_map,
    default_axis,
    expected_lg,
    full_4d_crosscheck,
)
from .modes import (
    BeamParams,
    LGIndex,
    ModeIndex,
    default_grid,
    dhg_field,
    hg_field,
    lg_field,
)
from .vortex import SlitSpec, double_slit_fringes, fringe_shift, phase_distance, winding

REFERENCE = BeamParams(wavelength=810e-9, waist=1e-3)
CRYSTAL = CrystalSpec(length=2e-3)
PUMP_WAVELENGTH = 405e-9
PUMP_WAIST = 1e-3


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"[{flag}] {self.name}: {self.value:.3e} vs tol {self.tolerance:.1e}{extra}"


def _pump(n: int, m: int) -> PumpSpec:
    return PumpSpec(ModeIndex(n, m), PUMP_WAVELENGTH, PUMP_WAIST)


def _orders(max_order: int):
    for order in range(max_order + 1):
        for m in range(order + 1):
            yield ModeIndex(order - m, m)


def relative_error(actual: np.ndarray, expected: np.ndarray) -> float:
    return float(np.max(np.abs(actual - expected)) / np.max(np.abs(expected)))


def align_phase(actual: np.ndarray, expected: np.ndarray) -> np.ndarray:
    """``actual`` times the unit phase that best matches ``expected``."""
    overlap = np.vdot(actual, expected)
    return actual * overlap / abs(overlap)


def check_expansion_oracle(max_order: int = 4, params: BeamParams = REFERENCE) -> CheckResult:
    grid = default_grid(params)
    start = time.perf_counter()
    worst = 0.0
    for idx in _orders(max_order):
        exact = dhg_expansion(idx).coeffs
        found = decompose(dhg_field(idx, params, grid), idx.order)
        numeric = np.array([found[ModeIndex(idx.order - j, j)] for j in range(idx.order + 1)])
        worst = max(worst, float(np.max(np.abs(numeric - exact))))

        exact_lg = lg_expansion(idx).coeffs
        found = decompose(lg_field(lg_index(idx), params, grid), idx.order)
        numeric = np.array([found[ModeIndex(idx.order - j, j)] for j in range(idx.order + 1)])
        worst = max(worst, float(np.max(np.abs(align_phase(numeric, exact_lg) - exact_lg))))
    elapsed = time.perf_counter() - start
    return CheckResult(
        "expansion oracle (DHG and LG vs b(n,m,j), order <= 4)",
        worst < 1e-6 and elapsed < 30.0,
        worst,
        1e-6,
        f"{elapsed:.1f} s",
    )


def check_fourier_eigenvalue(max_order: int = 6, params: BeamParams = REFERENCE) -> CheckResult:
    grid = default_grid(params)
    worst = 0.0
    for idx in _orders(max_order):
        f = hg_field(idx, params, grid)
        ft = fourier_transform(f)
        expected = 1j ** idx.order * hg_field(idx, params, (ft.axis_a, ft.axis_b)).values
        worst = max(worst, relative_error(ft.values, expected))
    return CheckResult("Fourier eigenvalue F[HG_nm] = i^(n+m) HG_nm, order <= 6", worst < 1e-6, worst, 1e-6)


def check_factorization(samples: int = 48, pumps=((0, 0), (1, 0), (2, 1))) -> CheckResult:
    start = time.perf_counter()
    worst = max(full_4d_crosscheck(_pump(n, m), CRYSTAL, samples) for n, m in pumps)
    elapsed = time.perf_counter() - start
    return CheckResult(
        f"4D direct vs factorized amplitude ({samples}^4)",
        worst < 1e-6 and elapsed < 120.0,
        worst,
        1e-6,
        f"{elapsed:.1f} s",
    )


def check_nonlocal_lg(pumps=((1, 0), (2, 0), (2, 2), (3, 1))) -> CheckResult:
    worst = 0.0
    for n, m in pumps:
        state = apply_nonlocal_converter(build_state(_pump(n, m), CRYSTAL))
        for plane in ("x", "y"):
            expected = expected_lg(state, plane).values
            actual = align_phase(state.factor(plane).values, expected)
            worst = max(worst, relative_error(actual, expected))
    return CheckResult("converted factors vs analytic LG^n_0, LG^m_0", worst < 1e-6, worst, 1e-6)


def check_doughnut() -> CheckResult:
    state = apply_nonlocal_converter(build_state(_pump(1, 0), CRYSTAL))
    cmap = coincidence_map(state, "x")
    centre = cmap.values[cmap.axis_a.samples // 2, cmap.axis_b.samples // 2]
    ratio = float(centre / cmap.values.max())
    return CheckResult("doughnut: origin / peak of converted HG10 coincidence map", ratio < 1e-10, ratio, 1e-10)


def fringe_shift_for(n: int, m: int = 0, detector2: float = 0.5, slits: SlitSpec = SlitSpec()) -> float:
    state = apply_nonlocal_converter(build_state(_pump(n, m), CRYSTAL, default_axis(_pump(n, m), 257)))
    plus = double_slit_fringes(state, slits, detector2)
    minus = double_slit_fringes(state, slits, -detector2)
    return fringe_shift(plus, minus)


def check_fringe_shift() -> list[CheckResult]:
    hg = fringe_shift_for(1)
    gauss = fringe_shift_for(0)
    return [
        CheckResult("fringe shift, HG10 pump (expect pi)", phase_distance(hg, pi) < 0.05, phase_distance(hg, pi), 0.05),
        CheckResult("fringe shift, Gaussian pump (expect 0)", phase_distance(gauss, 0.0) < 0.05, abs(gauss), 0.05),
    ]


def check_windings(max_order: int = 3) -> CheckResult:
    worst = 0.0
    mismatches = []
    for n in range(max_order + 1):
        for m in range(max_order + 1):
            pump = _pump(n, m)
            state = apply_nonlocal_converter(build_state(pump, CRYSTAL, default_axis(pump, 257)))
            for plane, order in (("x", n), ("y", m)):
                w = winding(state.factor(plane), state.down_params.waist)
                worst = max(worst, w.residual)
                if w.number != order:
                    mismatches.append(f"({n},{m}) {plane}: {w.number}")
    return CheckResult(
        "winding numbers (n, m) for n, m <= 3",
        worst < 0.05 and not mismatches,
        worst,
        0.05,
        "; ".join(mismatches),
    )


def check_normalization(max_order: int = 6, params: BeamParams = REFERENCE) -> list[CheckResult]:
    grid = default_grid(params)
    mode_err = 0.0
    coeff_err = 0.0
    for idx in _orders(max_order):
        for f in (hg_field(idx, params, grid), dhg_field(idx, params, grid), lg_field(lg_index(idx), params, grid)):
            mode_err = max(mode_err, abs(f.norm() - 1.0))
        for e in (dhg_expansion(idx), lg_expansion(idx), mode_converter_phases(dhg_expansion(idx))):
            coeff_err = max(coeff_err, abs(e.norm_squared() - 1.0))
    conv_err = 0.0
    for n, m in ((0, 0), (1, 0), (2, 2), (3, 1)):
        state = build_state(_pump(n, m), CRYSTAL)
        converted = apply_nonlocal_converter(state)
        for plane in ("x", "y"):
            conv_err = max(conv_err, abs(converted.factor(plane).norm() - state.factor(plane).norm()))
    return [
        CheckResult("mode norms (HG, DHG, LG, order <= 6)", mode_err < 1e-8, mode_err, 1e-8),
        CheckResult("expansion coefficient norms", coeff_err < 1e-10, coeff_err, 1e-10),
        CheckResult("converter norm preservation", conv_err < 1e-8, conv_err, 1e-8),
    ]


def check_determinism() -> CheckResult:
    from .io import ExperimentConfig, run_experiment

    outputs = []
    with tempfile.TemporaryDirectory() as tmp:
        for run in ("a", "b"):
            config = ExperimentConfig(_pump(1, 0), CRYSTAL, samples=65, output_dir=Path(tmp) / run)
            report = run_experiment(config)
            outputs.append(
                {p.name: p.read_bytes() for p in report.files if p.suffix in (".csv", ".txt")}
            )
    differing = [k for k in outputs[0] if outputs[0][k] != outputs[1].get(k)]
    return CheckResult("determinism of run artifacts", not differing, float(len(differing)), 0.0, ", ".join(differing))


def run_checks() -> list[CheckResult]:
    results = [
        check_expansion_oracle(),
        check_fourier_eigenvalue(),
        check_factorization(),
        check_nonlocal_lg(),
        check_doughnut(),
        *check_fringe_shift(),
        check_windings(),
        *check_normalization(),
        check_determinism(),
    ]
    return results
