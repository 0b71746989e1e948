"""Vortex witnesses: winding number, radial profile, double-slit fringe shift."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import pi

import numpy as np
from scipy.ndimage import map_coordinates
from scipy.integrate import quad, trapezoid
from scipy.optimize import OptimizeWarning, curve_fit

from .biphoton import BiphotonState, StateError
from .modes import Field2D, natural_scale

WINDING_TOLERANCE = 0.05
MIN_LOOP_AMPLITUDE = 1e-6
MIN_VISIBILITY = 0.1


class WindingError(ValueError):
    """The phase around the loop does not define an integer winding."""


class NoSignalError(ValueError):
    pass


class LowVisibilityError(ValueError):
    pass


def _index_coords(field: Field2D, sa, sb) -> np.ndarray:
    """Fractional array indices of natural-unit points ``(sa, sb)``."""
    out = []
    for axis, s in ((field.axis_a, sa), (field.axis_b, sb)):
        phys = np.asarray(s) / natural_scale(axis.kind, field.waist)
        out.append((phys - axis.min) / axis.spacing)
    return np.array(out)


def sample(field: Field2D, sa, sb, order: int = 3) -> np.ndarray:
    """Cubic-spline samples of ``field`` at natural-unit coordinates."""
    idx = _index_coords(field, sa, sb)
    re = map_coordinates(field.values.real, idx, order=order, mode="nearest")
    if not np.iscomplexobj(field.values):
        return re
    im = map_coordinates(field.values.imag, idx, order=order, mode="nearest")
    return re + 1j * im


@dataclass(frozen=True)
class Winding:
    number: int
    turns: float

    @property
    def residual(self) -> float:
        return abs(self.turns - self.number)


def winding(field: Field2D, radius: float, points: int = 720) -> Winding:
    """Accumulated phase around a loop about the origin, in turns.

    ``radius`` is a position-space length; on wavevector axes the
    waist-matched equivalent ``2 r / w²`` is used, i.e. the loop is a circle
    of radius ``r / w`` in natural units on every axis.
    """
    rho = radius / field.waist
    half = min(
        min(abs(ax.min), abs(ax.max)) * natural_scale(ax.kind, field.waist)
        for ax in (field.axis_a, field.axis_b)
    )
    if not 0 < rho < half:
        raise WindingError(f"loop radius {rho:.3g} waists is outside the grid (half-width {half:.3g})")
    theta = np.linspace(0.0, 2.0 * pi, points, endpoint=False)
    loop = sample(field, rho * np.cos(theta), rho * np.sin(theta))
    peak = np.max(np.abs(field.values))
    if np.min(np.abs(loop)) <= MIN_LOOP_AMPLITUDE * peak:
        raise WindingError("field amplitude vanishes on the loop; winding is undefined")
    steps = np.angle(np.roll(loop, -1) / loop)
    turns = float(np.sum(steps) / (2.0 * pi))
    return Winding(int(round(turns)), turns)


def winding_number(field: Field2D, radius: float, points: int = 720) -> int:
    """Integer topological charge enclosed by the loop of ``radius`` (see :func:`winding`)."""
    w = winding(field, radius, points)
    if w.residual >= WINDING_TOLERANCE:
        raise WindingError(f"phase winds {w.turns:.4f} turns, not close to an integer")
    return w.number


def radial_profile(intensity: Field2D, n_bins: int = 128) -> np.ndarray:
    """Azimuthal average of ``intensity`` in ``n_bins`` rings about the origin.

    Returns an ``(n_bins, 2)`` array of ring-centre radius (position units of
    the field's waist) and mean intensity. Rings extend to the largest circle
    inscribed in the grid; empty rings are NaN.
    """
    if n_bins < 4:
        raise ValueError(f"need at least 4 bins, got {n_bins}")
    sa, sb = intensity.scaled_mesh()
    r = np.hypot(sa, sb)
    r_max = min(
        min(abs(ax.min), abs(ax.max)) * natural_scale(ax.kind, intensity.waist)
        for ax in (intensity.axis_a, intensity.axis_b)
    )
    edges = np.linspace(0.0, r_max, n_bins + 1)
    values = np.real(intensity.values)
    inside = r < r_max
    which = np.digitize(r[inside], edges) - 1
    sums = np.bincount(which, weights=values[inside], minlength=n_bins)[:n_bins]
    counts = np.bincount(which, minlength=n_bins)[:n_bins]
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = sums / counts
    centres = 0.5 * (edges[1:] + edges[:-1]) * intensity.waist
    return np.column_stack([centres, mean])


# -- double slit -------------------------------------------------------------


@dataclass(frozen=True)
class SlitSpec:
    """Two slits on photon 1's axis, in waist units of the non-local plane."""

    separation: float = 1.0
    width: float = 0.2
    orientation: str = "x"

    def __post_init__(self):
        if not self.separation > self.width > 0:
            raise ValueError(f"need separation > width > 0, got {self.separation}, {self.width}")
        if self.orientation not in ("x", "y"):
            raise ValueError(f"orientation must be 'x' or 'y', got {self.orientation!r}")


@dataclass(frozen=True)
class FringeScan:
    positions: np.ndarray
    counts: np.ndarray
    detector2_position: float
    separation: float
    width: float

    def __post_init__(self):
        positions = np.asarray(self.positions, dtype=float)
        counts = np.asarray(self.counts, dtype=float)
        if positions.shape != counts.shape:
            raise ValueError("positions and counts differ in length")
        if np.any(np.diff(positions) <= 0):
            raise ValueError("positions must be strictly increasing")
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "counts", counts)

    def envelope(self) -> np.ndarray:
        return np.sinc(self.width * self.positions / (2.0 * pi)) ** 2


def default_scan(slits: SlitSpec, samples: int = 1001) -> np.ndarray:
    """Far-field coordinates covering the central single-slit lobe."""
    edge = 2.0 * pi / slits.width
    return np.linspace(-edge, edge, samples)


def conditional_amplitude(state: BiphotonState, plane: str, detector2_position: float) -> tuple[np.ndarray, np.ndarray]:
    """Photon-1 amplitude along the factor's first axis with detector 2 fixed (natural units)."""
    f = state.factor(plane)
    s1 = f.axis_a.scaled(f.waist)
    amp = sample(f, s1, np.full_like(s1, detector2_position))
    if np.max(np.abs(amp)) < 1e-6 * np.max(np.abs(f.values)):
        raise NoSignalError(f"no coincidences with detector 2 at {detector2_position} waists")
    return s1, amp


def slit_amplitudes(s1: np.ndarray, amp: np.ndarray, slits: SlitSpec, points: int = 201) -> tuple[complex, complex]:
    """Mean amplitude over each slit window, at ``+d/2`` and ``-d/2``."""
    out = []
    for centre in (0.5 * slits.separation, -0.5 * slits.separation):
        s = np.linspace(centre - 0.5 * slits.width, centre + 0.5 * slits.width, points)
        a = np.interp(s, s1, amp.real) + 1j * np.interp(s, s1, amp.imag)
        out.append(complex(trapezoid(a, s) / slits.width))
    return out[0], out[1]


def double_slit_fringes(
    state: BiphotonState,
    slits: SlitSpec,
    detector2_position: float,
    scan: np.ndarray | None = None,
    require_converted: bool = True,
) -> FringeScan:
    """Far-field coincidence fringes behind a double slit in photon 1's path.

    Detector 2 is a point detector at ``detector2_position`` (waist units) on
    photon 2's axis of the plane selected by ``slits.orientation``. Each slit
    transmits its mean conditional amplitude, and the Fraunhofer pattern is

        a² sinc²(a u / 2) |c₊ e^{-i u d/2} + c₋ e^{i u d/2}|²

    over far-field coordinate ``u``.
    """
    if require_converted and not state.converted:
        raise StateError("fringe witness expects the converted state")
    s1, amp = conditional_amplitude(state, slits.orientation, detector2_position)
    c_plus, c_minus = slit_amplitudes(s1, amp, slits)
    u = default_scan(slits) if scan is None else np.asarray(scan, dtype=float)
    d, a = slits.separation, slits.width
    envelope = (a * np.sinc(a * u / (2.0 * pi))) ** 2
    pattern = np.abs(c_plus * np.exp(-0.5j * u * d) + c_minus * np.exp(0.5j * u * d)) ** 2
    return FringeScan(u, envelope * pattern, detector2_position, d, a)


def _fringe_model(u, amplitude, visibility, k, phase, envelope):
    return envelope * amplitude * (1.0 + visibility * np.cos(k * u + phase))


def fit_fringes(scan: FringeScan) -> tuple[float, float, float]:
    """Least-squares fit to ``envelope·B(1 + V cos(k u + φ))``; returns ``(V, k, φ)``."""
    env = scan.envelope()
    k0 = scan.separation
    u = scan.positions
    # linear solve at the nominal fringe frequency seeds the nonlinear fit
    design = np.column_stack([env, env * np.cos(k0 * u), env * np.sin(k0 * u)])
    (b, c, s), *_ = np.linalg.lstsq(design, scan.counts, rcond=None)
    if b <= 0:
        raise LowVisibilityError("fringe fit found no positive background")
    p0 = [b, np.hypot(c, s) / b, k0, np.arctan2(-s, c)]
    with warnings.catch_warnings():
        # noise-free scans leave the covariance undefined
        warnings.simplefilter("ignore", OptimizeWarning)
        popt, _ = curve_fit(
            lambda x, B, V, k, phi: _fringe_model(x, B, V, k, phi, env),
            u,
            scan.counts,
            p0=p0,
            maxfev=20000,
        )
    amplitude, visibility, k, phase = popt
    if visibility < 0:
        visibility, phase = -visibility, phase + pi
    return float(visibility), float(k), float(phase)


def wrap_phase(phi: float) -> float:
    """Wrap to ``(-π, π]``."""
    return float(pi - np.mod(pi - phi, 2.0 * pi))


def fringe_shift(scan_a: FringeScan, scan_b: FringeScan) -> float:
    """Relative fringe phase ``φ_a - φ_b`` in ``(-π, π]``."""
    if scan_a.positions.shape != scan_b.positions.shape or not np.allclose(scan_a.positions, scan_b.positions):
        raise ValueError("scans must share the same position axis")
    v_a, _, phi_a = fit_fringes(scan_a)
    v_b, _, phi_b = fit_fringes(scan_b)
    if min(v_a, v_b) < MIN_VISIBILITY:
        raise LowVisibilityError(f"fringe visibility too low ({v_a:.3f}, {v_b:.3f})")
    return wrap_phase(phi_a - phi_b)


def phase_distance(a: float, b: float) -> float:
    """Smallest angular distance between two phases."""
    return abs(wrap_phase(a - b))


def expected_fringe_shift(order: int, detector2_position: float, slits: SlitSpec) -> float:
    """Shift between detector 2 at ``±x2`` for an ideal LG^order_0 non-local mode.

    Averages ``(s + i x2)^order e^{-s²}`` over each slit by quadrature. For
    point slits this reduces to ``-4 n atan(2 x2 / d)``, i.e. ``n π`` at
    ``x2 = d/2``.
    """

    def phase(x2: float) -> float:
        means = []
        for centre in (0.5 * slits.separation, -0.5 * slits.separation):
            lo, hi = centre - 0.5 * slits.width, centre + 0.5 * slits.width
            f = lambda s: (s + 1j * x2) ** order * np.exp(-s * s)
            means.append(quad(lambda s: f(s).real, lo, hi)[0] + 1j * quad(lambda s: f(s).imag, lo, hi)[0])
        return -float(np.angle(means[0] * np.conj(means[1])))

    return wrap_phase(phase(detector2_position) - phase(-detector2_position))
