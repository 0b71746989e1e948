"""Two-photon amplitude of degenerate, quasi-collinear down-conversion.

The wavevector amplitude is ``Ψ(q1, q2) = v(q1 + q2) γ(q1 - q2)`` with ``v`` the
pump angular spectrum and ``γ`` the phase matching. When ``γ`` is a Gaussian
matched to the pump, Ψ separates into an x-factor on the ``(q_x1, q_x2)``
plane and a y-factor on ``(q_y1, q_y2)``; each factor is a diagonal HG mode of
the down-converted family (wavelength 2λ, waist √2·w0). Only the two factors
are stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from math import pi, sqrt
from typing import Literal

import numpy as np
from scipy.optimize import minimize_scalar

from .algebra import fourier_transform
from .modes import (
    DEFAULT_HALF_WIDTH,
    DEFAULT_SAMPLES,
    WAVEVECTOR,
    Axis,
    BeamParams,
    Field2D,
    LGIndex,
    ModeIndex,
    hermite_gauss_1d,
    hg_envelope,
    lg_field,
)

PhaseMatching = Literal["exact_sinc", "gaussian_approx"]
MAX_4D_SAMPLES = 64


class UnsupportedCombinationError(ValueError):
    pass


class StateError(RuntimeError):
    pass


class ResourceError(MemoryError):
    pass


@dataclass(frozen=True)
class PumpSpec:
    mode: ModeIndex
    wavelength: float
    waist: float

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ValueError(f"pump wavelength must be positive, got {self.wavelength}")
        if not self.waist > 0:
            raise ValueError(f"pump waist must be positive, got {self.waist}")

    @property
    def params(self) -> BeamParams:
        return BeamParams(self.wavelength, self.waist)


@dataclass(frozen=True)
class CrystalSpec:
    length: float
    phase_matching: PhaseMatching = "gaussian_approx"

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"crystal length must be positive, got {self.length}")
        if self.phase_matching not in ("exact_sinc", "gaussian_approx"):
            raise ValueError(f"unknown phase matching {self.phase_matching!r}")


@dataclass(frozen=True)
class BiphotonState:
    factor_x: Field2D
    factor_y: Field2D
    converted: bool
    down_params: BeamParams
    pump: PumpSpec
    crystal: CrystalSpec
    approximation: str = "gaussian_approx"
    sigma_fit: float = field(default=float("nan"))

    def factor(self, plane: str) -> Field2D:
        if plane in ("x", "x-plane"):
            return self.factor_x
        if plane in ("y", "y-plane"):
            return self.factor_y
        raise ValueError(f"plane must be 'x' or 'y', got {plane!r}")


def down_converted_params(pump: PumpSpec) -> BeamParams:
    """Degenerate signal/idler family: twice the pump wavelength, √2 times its waist."""
    return BeamParams(2.0 * pump.wavelength, sqrt(2.0) * pump.waist)


# -- phase matching ----------------------------------------------------------


def sinc_argument(q2, crystal: CrystalSpec, pump_wavelength: float):
    """``u = λ L |q|² / (8π)`` for squared transverse wavevector ``q2``."""
    return pump_wavelength * crystal.length * np.asarray(q2) / (8.0 * pi)


@lru_cache(maxsize=None)
def _gaussian_fit_rate() -> float:
    """Best ``c`` in ``exp(-c u) ≈ sin(u)/u`` over the half-maximum core of the central lobe.

    Points are uniform in ``u``, which is uniform transverse area since ``u ∝ |q|²``.
    """
    u = np.linspace(0.0, np.pi, 200001)
    s = np.sinc(u / np.pi)
    core = s >= 0.5
    u, s = u[core], s[core]
    res = minimize_scalar(lambda c: np.sum((s - np.exp(-c * u)) ** 2), bounds=(1e-3, 5.0), method="bounded",
                          options={"xatol": 1e-12})
    return float(res.x)


def gaussian_width(crystal: CrystalSpec, pump_wavelength: float) -> float:
    """σ of the fitted Gaussian ``exp(-σ² |q|²)`` standing in for the sinc."""
    return sqrt(_gaussian_fit_rate() * pump_wavelength * crystal.length / (8.0 * pi))


def phase_matching(q, crystal: CrystalSpec, pump_wavelength: float):
    """Phase-matching amplitude at transverse wavevector ``q = (q_x, q_y)``.

    ``exact_sinc`` gives ``sin(u)/u`` with ``u = λ L |q|²/(8π)``; ``gaussian_approx``
    gives the fitted ``exp(-σ² |q|²)`` from :func:`gaussian_width`.
    """
    qx, qy = q
    q2 = np.asarray(qx, dtype=float) ** 2 + np.asarray(qy, dtype=float) ** 2
    if crystal.phase_matching == "exact_sinc":
        u = sinc_argument(q2, crystal, pump_wavelength)
        return np.sinc(u / np.pi)
    sigma = gaussian_width(crystal, pump_wavelength)
    return np.exp(-(sigma ** 2) * q2)


def matched_phase_matching(q, pump: PumpSpec):
    """Gaussian-filtered γ matched to the pump: ``exp(-w0² |q|² / 4)``."""
    qx, qy = q
    return np.exp(-(pump.waist ** 2) * (np.asarray(qx) ** 2 + np.asarray(qy) ** 2) / 4.0)


# -- state construction ------------------------------------------------------


def default_axis(pump: PumpSpec, samples: int = DEFAULT_SAMPLES, half_width: float = DEFAULT_HALF_WIDTH) -> Axis:
    return Axis.centered(WAVEVECTOR, down_converted_params(pump).waist, half_width, samples)


def _factor(n: int, pump: PumpSpec, axis: Axis, down: BeamParams) -> Field2D:
    # v_1d(q1 + q2) * γ_1d(q1 - q2), normalized analytically
    q1, q2 = np.meshgrid(axis.coords, axis.coords, indexing="ij")
    w0 = pump.waist
    pump_1d = hermite_gauss_1d(n, (q1 + q2) * w0 / 2.0) * np.sqrt(w0 / 2.0)
    gamma_1d = np.exp(-(w0 ** 2) * (q1 - q2) ** 2 / 4.0)
    norm = np.sqrt(np.sqrt(2.0 * pi) / (2.0 * w0))
    return Field2D(axis, axis, pump_1d * gamma_1d / norm, down.waist)


def build_state(pump: PumpSpec, crystal: CrystalSpec, axis: Axis | None = None) -> BiphotonState:
    """Factorized two-photon amplitude on the ``(q_1, q_2)`` planes of x and y.

    The Gaussian spatial filter is modelled as reshaping γ to
    ``exp(-w0² |q|²/4)``, the width for which the factors are exactly
    DHG_{n0} and DHG_{m0}. The unfiltered fitted width is kept in
    ``sigma_fit`` for reference.
    """
    if crystal.phase_matching != "gaussian_approx":
        raise UnsupportedCombinationError(
            "factorized storage needs gaussian_approx phase matching; "
            "use full_4d_crosscheck for exact_sinc"
        )
    axis = axis or default_axis(pump)
    if axis.kind != WAVEVECTOR:
        raise ValueError("the state is built on wavevector axes")
    down = down_converted_params(pump)
    return BiphotonState(
        factor_x=_factor(pump.mode.n, pump, axis, down),
        factor_y=_factor(pump.mode.m, pump, axis, down),
        converted=False,
        down_params=down,
        pump=pump,
        crystal=crystal,
        approximation="gaussian_approx (filter-matched)",
        sigma_fit=gaussian_width(crystal, pump.wavelength),
    )


def apply_nonlocal_converter(state: BiphotonState) -> BiphotonState:
    """Fourier-transform photon 2 in both factors: ``(q_1, q_2) -> (q_1, ρ_2)``.

    Each HG_j component of photon 2 picks up ``i^j``, so DHG_{n0} becomes LG^n_0
    on the non-local plane.
    """
    if state.converted:
        raise StateError("the non-local converter has already been applied")
    return replace(
        state,
        factor_x=fourier_transform(state.factor_x, axes=(1,)),
        factor_y=fourier_transform(state.factor_y, axes=(1,)),
        converted=True,
    )


def expected_lg(state: BiphotonState, plane: str) -> Field2D:
    """Analytic LG^n_0 (or LG^m_0) on the factor's own axes."""
    f = state.factor(plane)
    order = state.pump.mode.n if plane.startswith("x") else state.pump.mode.m
    return lg_field(LGIndex(0, order), state.down_params, (f.axis_a, f.axis_b), allow_mixed=True)


def coincidence_map(state: BiphotonState, plane: str) -> Field2D:
    """Joint detection probability ``|factor|²`` normalized to unit sum."""
    f = state.factor(plane)
    intensity = np.abs(f.values) ** 2
    return f.with_values(intensity / intensity.sum())


# -- 4D cross-check ----------------------------------------------------------


def full_4d_crosscheck(pump: PumpSpec, crystal: CrystalSpec, samples: int = 48, half_width: float = 6.0) -> float:
    """Max deviation between the direct 4D ``v(q1+q2) γ(q1-q2)`` and the factor product.

    Both arrays are normalized on the grid and phase-aligned; the deviation is
    relative to the peak amplitude. With ``gaussian_approx`` γ is the
    filter-matched Gaussian; with ``exact_sinc`` the true sinc is used, and the
    residual then measures how far the sinc is from factorizable.
    """
    if samples > MAX_4D_SAMPLES:
        raise ResourceError(f"4D grid of {samples}^4 points exceeds the {MAX_4D_SAMPLES}^4 limit")
    axis = default_axis(pump, samples, half_width)
    q = axis.coords
    qx1 = q[:, None, None, None]
    qx2 = q[None, :, None, None]
    qy1 = q[None, None, :, None]
    qy2 = q[None, None, None, :]
    direct = hg_envelope(pump.mode.n, pump.mode.m, qx1 + qx2, qy1 + qy2, pump.waist)
    diff = (qx1 - qx2, qy1 - qy2)
    if crystal.phase_matching == "exact_sinc":
        direct = direct * phase_matching(diff, crystal, pump.wavelength)
    else:
        direct = direct * matched_phase_matching(diff, pump)

    matched = replace(crystal, phase_matching="gaussian_approx")
    state = build_state(pump, matched, axis)
    fx = state.factor_x.values
    fy = state.factor_y.values
    product = fx[:, :, None, None] * fy[None, None, :, :]

    direct = direct / np.linalg.norm(direct)
    product = product / np.linalg.norm(product)
    overlap = np.vdot(direct, product)
    direct = direct * overlap / abs(overlap)
    return float(np.max(np.abs(direct - product)) / np.max(np.abs(product)))
