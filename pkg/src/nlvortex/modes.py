"""Hermite-Gaussian, Laguerre-Gaussian and diagonal HG mode fields on grids.

Every field lives on a pair of uniform axes. An axis is either a position
axis (metres) or a wavevector axis (rad/m). For a family of waist ``w`` the
natural dimensionless coordinate is ``x / w`` on a position axis and
``q * w / 2`` on a wavevector axis, so the same normalized mode shape is
used in both representations and the two are exact Fourier partners.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial, pi, sqrt
from typing import Literal

import numpy as np

POSITION = "position"
WAVEVECTOR = "wavevector"

AxisKind = Literal["position", "wavevector"]

# Half-width of default grids, in waists (position) or conjugate waists (wavevector).
DEFAULT_HALF_WIDTH = 6.0
# Odd, so the origin is a grid point.
DEFAULT_SAMPLES = 513


class RepresentationError(ValueError):
    """Axes of a grid mix position and wavevector kinds where that is not allowed."""


class GridError(ValueError):
    """Grid does not satisfy the requirements of an operation."""


@dataclass(frozen=True)
class ModeIndex:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ValueError(f"mode indices must be non-negative, got ({self.n}, {self.m})")

    @property
    def order(self) -> int:
        return self.n + self.m


@dataclass(frozen=True)
class LGIndex:
    p: int
    l: int  # noqa: E741

    def __post_init__(self):
        if self.p < 0:
            raise ValueError(f"radial index must be non-negative, got {self.p}")

    @property
    def order(self) -> int:
        return abs(self.l) + 2 * self.p

    @classmethod
    def from_mode_index(cls, idx: ModeIndex) -> "LGIndex":
        return cls(p=min(idx.n, idx.m), l=idx.n - idx.m)


@dataclass(frozen=True)
class BeamParams:
    """Wavelength and waist of a paraxial family; ``gouy_phase`` is the frozen reference-plane value."""

    wavelength: float
    waist: float
    gouy_phase: float = 0.0

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")
        if not self.waist > 0:
            raise ValueError(f"waist must be positive, got {self.waist}")


@dataclass(frozen=True)
class Axis:
    kind: AxisKind
    samples: int
    min: float
    max: float

    def __post_init__(self):
        if self.kind not in (POSITION, WAVEVECTOR):
            raise ValueError(f"unknown axis kind {self.kind!r}")
        if self.samples < 2:
            raise GridError(f"an axis needs at least 2 samples, got {self.samples}")
        if not self.max > self.min:
            raise GridError(f"axis max ({self.max}) must exceed min ({self.min})")

    @property
    def coords(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.samples)

    @property
    def spacing(self) -> float:
        return (self.max - self.min) / (self.samples - 1)

    def scaled(self, waist: float) -> np.ndarray:
        """Coordinates in units natural to a family of the given waist."""
        return self.coords * natural_scale(self.kind, waist)

    @classmethod
    def centered(
        cls,
        kind: AxisKind,
        waist: float,
        half_width: float = DEFAULT_HALF_WIDTH,
        samples: int = DEFAULT_SAMPLES,
    ) -> "Axis":
        """Symmetric axis spanning ``±half_width`` natural units of a family of waist ``waist``."""
        extent = half_width / natural_scale(kind, waist)
        return cls(kind, samples, -extent, extent)

    def conjugate(self, waist: float) -> "Axis":
        """Axis of the other kind covering the same dimensionless span (waist-matched)."""
        other = WAVEVECTOR if self.kind == POSITION else POSITION
        ratio = natural_scale(self.kind, waist) / natural_scale(other, waist)
        return Axis(other, self.samples, self.min * ratio, self.max * ratio)


@dataclass(frozen=True)
class Field2D:
    """Complex amplitude sampled on ``axis_a`` x ``axis_b``; ``waist`` fixes the natural units."""

    axis_a: Axis
    axis_b: Axis
    values: np.ndarray = field(repr=False)
    waist: float = 1.0

    def __post_init__(self):
        values = np.array(self.values)
        values = values.astype(complex if np.iscomplexobj(values) else float)
        if values.shape != (self.axis_a.samples, self.axis_b.samples):
            raise GridError(
                f"values shape {values.shape} does not match axes "
                f"({self.axis_a.samples}, {self.axis_b.samples})"
            )
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def cell_area(self) -> float:
        return self.axis_a.spacing * self.axis_b.spacing

    @property
    def kinds(self) -> tuple[str, str]:
        return self.axis_a.kind, self.axis_b.kind

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.cell_area))

    def inner(self, other: "Field2D") -> complex:
        """Discrete overlap ``<self, other>`` (conjugate-linear in ``self``)."""
        return complex(np.sum(np.conj(self.values) * other.values) * self.cell_area)

    def with_values(self, values: np.ndarray) -> "Field2D":
        return Field2D(self.axis_a, self.axis_b, values, self.waist)

    def scaled_mesh(self) -> tuple[np.ndarray, np.ndarray]:
        sa = self.axis_a.scaled(self.waist)
        sb = self.axis_b.scaled(self.waist)
        return np.meshgrid(sa, sb, indexing="ij")


def natural_scale(kind: str, waist: float) -> float:
    """Factor taking a physical coordinate of ``kind`` to natural units."""
    if kind == POSITION:
        return 1.0 / waist
    if kind == WAVEVECTOR:
        return waist / 2.0
    raise ValueError(f"unknown axis kind {kind!r}")


def default_grid(params: BeamParams, kind: AxisKind = POSITION) -> tuple[Axis, Axis]:
    ax = Axis.centered(kind, params.waist)
    return ax, ax


# -- special functions -------------------------------------------------------


def hermite_poly(n: int, x):
    """Physicists' Hermite polynomial H_n(x) by three-term recurrence."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h if h.ndim else float(h)


def laguerre_poly(p: int, alpha: int, x):
    """Generalized Laguerre polynomial L_p^alpha(x) by three-term recurrence."""
    if p < 0 or alpha < 0:
        raise ValueError(f"need p >= 0 and alpha >= 0, got p={p}, alpha={alpha}")
    x = np.asarray(x, dtype=float)
    l_prev = np.ones_like(x)
    if p == 0:
        return l_prev if l_prev.ndim else float(l_prev)
    lag = 1.0 + alpha - x
    for k in range(1, p):
        l_prev, lag = lag, ((2 * k + 1 + alpha - x) * lag - (k + alpha) * l_prev) / (k + 1)
    return lag if lag.ndim else float(lag)


def hermite_gauss_1d(n: int, s) -> np.ndarray:
    """Unit-norm 1D HG mode of unit waist, ``∝ H_n(√2 s) exp(-s²)``.

    Uses the normalized recurrence for Hermite functions, which stays finite
    for large ``n`` where H_n alone would overflow.
    """
    t = np.sqrt(2.0) * np.asarray(s, dtype=float)
    phi_prev = np.zeros_like(t)
    phi = pi ** -0.25 * np.exp(-0.5 * t * t)
    for k in range(n):
        phi_prev, phi = phi, np.sqrt(2.0 / (k + 1)) * t * phi - np.sqrt(k / (k + 1)) * phi_prev
    return 2.0 ** 0.25 * phi


def hg_profile_1d(n: int, axis: Axis, waist: float) -> np.ndarray:
    """Unit-norm physical 1D HG mode on ``axis`` (either representation)."""
    scale = natural_scale(axis.kind, waist)
    return hermite_gauss_1d(n, axis.coords * scale) * np.sqrt(scale)


def hg_envelope(n: int, m: int, qx, qy, waist: float):
    """Unnormalized wavevector-space HG_nm, exactly as the textbook angular-spectrum form.

    ``H_n(w q_x / √2) H_m(w q_y / √2) exp(-w² (q_x² + q_y²) / 4)``
    """
    qx = np.asarray(qx, dtype=float)
    qy = np.asarray(qy, dtype=float)
    arg = waist / np.sqrt(2.0)
    return (
        hermite_poly(n, arg * qx)
        * hermite_poly(m, arg * qy)
        * np.exp(-(waist ** 2) * (qx ** 2 + qy ** 2) / 4.0)
    )


# -- 2D fields ---------------------------------------------------------------


def _check_grid(grid, allow_mixed: bool) -> tuple[Axis, Axis]:
    axis_a, axis_b = grid
    if not allow_mixed and axis_a.kind != axis_b.kind:
        raise RepresentationError(
            f"axes must share a representation, got {axis_a.kind!r} and {axis_b.kind!r}"
        )
    return axis_a, axis_b


def _amplitude_scale(axis_a: Axis, axis_b: Axis, waist: float) -> float:
    return sqrt(natural_scale(axis_a.kind, waist) * natural_scale(axis_b.kind, waist))


def _gouy(order: int, params: BeamParams) -> complex:
    return np.exp(-1j * (order + 1) * params.gouy_phase)


def hg_field(idx: ModeIndex, params: BeamParams, grid=None, *, allow_mixed: bool = False) -> Field2D:
    """Normalized HG_nm on ``grid`` (pair of axes; defaults to position axes)."""
    axis_a, axis_b = _check_grid(grid or default_grid(params), allow_mixed)
    ua = hg_profile_1d(idx.n, axis_a, params.waist)
    ub = hg_profile_1d(idx.m, axis_b, params.waist)
    values = np.outer(ua, ub) * _gouy(idx.order, params)
    return Field2D(axis_a, axis_b, values, params.waist)


def lg_values(p: int, l: int, sa, sb) -> np.ndarray:  # noqa: E741
    """Unit-norm LG_p^l of unit waist at natural coordinates ``(sa, sb)``."""
    r2 = sa * sa + sb * sb
    al = abs(l)
    norm = sqrt(2.0 * factorial(p) / (pi * factorial(p + al)))
    radial = (2.0 * r2) ** (al / 2.0) * laguerre_poly(p, al, 2.0 * r2) * np.exp(-r2)
    return norm * radial * np.exp(1j * l * np.arctan2(sb, sa))


def lg_field(idx: LGIndex, params: BeamParams, grid=None, *, allow_mixed: bool = False) -> Field2D:
    """Normalized LG_p^l from the closed-form radial polynomial times ``exp(i l θ)``."""
    axis_a, axis_b = _check_grid(grid or default_grid(params), allow_mixed)
    sa, sb = np.meshgrid(axis_a.scaled(params.waist), axis_b.scaled(params.waist), indexing="ij")
    values = lg_values(idx.p, idx.l, sa, sb)
    values = values * _amplitude_scale(axis_a, axis_b, params.waist) * _gouy(idx.order, params)
    return Field2D(axis_a, axis_b, values, params.waist)


def dhg_field(idx: ModeIndex, params: BeamParams, grid=None, *, allow_mixed: bool = False) -> Field2D:
    """HG_nm evaluated at the 45°-rotated coordinates ``((a+b)/√2, (a-b)/√2)``."""
    axis_a, axis_b = _check_grid(grid or default_grid(params), allow_mixed)
    sa, sb = np.meshgrid(axis_a.scaled(params.waist), axis_b.scaled(params.waist), indexing="ij")
    u = (sa + sb) / np.sqrt(2.0)
    v = (sa - sb) / np.sqrt(2.0)
    values = hermite_gauss_1d(idx.n, u) * hermite_gauss_1d(idx.m, v)
    values = values * _amplitude_scale(axis_a, axis_b, params.waist) * _gouy(idx.order, params)
    return Field2D(axis_a, axis_b, values, params.waist)
