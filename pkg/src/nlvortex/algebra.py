"""Basis changes between HG, diagonal HG and LG modes.

The closed-form coefficients are computed in exact integer arithmetic; the
numerical overlap decomposition is kept separate so each can check the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial, sqrt

import numpy as np

from .modes import (
    Axis,
    BeamParams,
    Field2D,
    GridError,
    LGIndex,
    ModeIndex,
    RepresentationError,
    hg_profile_1d,
)


@dataclass(frozen=True)
class ExpansionCoeffs:
    """Coefficients of a mode of order N over the components HG_{N-j, j}, j = 0..N."""

    order: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.shape != (self.order + 1,):
            raise ValueError(f"order {self.order} needs {self.order + 1} coefficients, got {coeffs.shape}")
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def components(self):
        """Yield ``(ModeIndex(N-j, j), coeff)`` pairs."""
        for j, c in enumerate(self.coeffs):
            yield ModeIndex(self.order - j, j), complex(c)


def derivative_coefficient(n: int, m: int, j: int) -> int:
    """``(1/j!) d^j/dt^j [(1+t)^n (1-t)^m]`` at ``t = 0``, i.e. the t^j coefficient.

    The factor ordering matches HG_nm in the rotated frame ``((x+y)/√2, (x-y)/√2)``.
    """
    return sum(comb(n, j - k) * comb(m, k) * (-1) ** k for k in range(max(0, j - n), min(j, m) + 1))


def b_coeff(n: int, m: int, j: int) -> float:
    """Real weight of HG_{N-j, j} in the diagonal mode DHG_nm, N = n + m."""
    N = n + m
    if n < 0 or m < 0:
        raise ValueError(f"mode indices must be non-negative, got ({n}, {m})")
    if not 0 <= j <= N:
        raise IndexError(f"j must lie in [0, {N}], got {j}")
    ratio = factorial(N - j) * factorial(j) / (2 ** N * factorial(n) * factorial(m))
    return sqrt(ratio) * derivative_coefficient(n, m, j)


def dhg_expansion(idx: ModeIndex) -> ExpansionCoeffs:
    N = idx.order
    return ExpansionCoeffs(N, [b_coeff(idx.n, idx.m, j) for j in range(N + 1)])


def lg_expansion(idx: ModeIndex) -> ExpansionCoeffs:
    """HG weights of the LG mode with ``p = min(n, m)``, ``l = n - m`` (see :func:`lg_index`)."""
    N = idx.order
    return ExpansionCoeffs(N, [1j ** j * b_coeff(idx.n, idx.m, j) for j in range(N + 1)])


def lg_index(idx: ModeIndex) -> LGIndex:
    return LGIndex.from_mode_index(idx)


def mode_converter_phases(expansion: ExpansionCoeffs) -> ExpansionCoeffs:
    """Phase ``i^j`` on the j-th component, as the astigmatic converter imparts."""
    phases = 1j ** np.arange(expansion.order + 1)
    return ExpansionCoeffs(expansion.order, phases * expansion.coeffs)


def reconstruct(expansion: ExpansionCoeffs, params: BeamParams, grid) -> Field2D:
    """Sum ``Σ_j c_j HG_{N-j, j}`` on ``grid``; axes may be of either kind."""
    axis_a, axis_b = grid
    values = np.zeros((axis_a.samples, axis_b.samples), dtype=complex)
    for mode, c in expansion.components():
        ua = hg_profile_1d(mode.n, axis_a, params.waist)
        ub = hg_profile_1d(mode.m, axis_b, params.waist)
        values += c * np.outer(ua, ub)
    gouy = np.exp(-1j * (expansion.order + 1) * params.gouy_phase)
    return Field2D(axis_a, axis_b, values * gouy, params.waist)


@dataclass(frozen=True)
class Decomposition:
    coeffs: dict
    residual: float

    def __getitem__(self, key) -> complex:
        if not isinstance(key, ModeIndex):
            key = ModeIndex(*key)
        return self.coeffs[key]


def decompose(field: Field2D, max_order: int) -> Decomposition:
    """Overlaps ``<HG_nm, field>`` for all ``n + m <= max_order``.

    The HG basis uses the field's own waist and the representation of each
    axis, so mixed position/wavevector planes decompose too. ``residual`` is
    the norm of the part of the field outside the truncated basis.
    """
    if max_order < 0:
        raise ValueError(f"max_order must be non-negative, got {max_order}")
    na = np.array([hg_profile_1d(k, field.axis_a, field.waist) for k in range(max_order + 1)])
    nb = np.array([hg_profile_1d(k, field.axis_b, field.waist) for k in range(max_order + 1)])
    overlaps = na @ field.values @ nb.T * field.cell_area
    coeffs = {}
    captured = 0.0
    for n in range(max_order + 1):
        for m in range(max_order + 1 - n):
            c = complex(overlaps[n, m])
            coeffs[ModeIndex(n, m)] = c
            captured += abs(c) ** 2
    residual = sqrt(max(field.norm() ** 2 - captured, 0.0))
    return Decomposition(coeffs, residual)


def _dft_matrix(axis_in: Axis, axis_out: Axis, sign: float) -> np.ndarray:
    x = axis_in.coords
    k = axis_out.coords
    return np.exp(sign * 1j * np.outer(k, x)) * axis_in.spacing / np.sqrt(2.0 * np.pi)


def fourier_transform(field: Field2D, axes=(0, 1), inverse: bool = False) -> Field2D:
    """Unitary continuous Fourier transform of ``field`` along ``axes``.

    The forward kernel is ``exp(+i k x) / √(2π)`` per axis, under which a
    unit-waist-matched HG_n is an eigenfunction with eigenvalue ``i^n``; the
    inverse uses ``exp(-i k x)``. Each transformed axis is replaced by its
    waist-matched conjugate, so the output samples the same natural
    coordinates as the input. The integral is evaluated as an explicit
    matrix DFT, which is spectrally accurate for well-contained fields.
    """
    axes = tuple(sorted(set(axes)))
    if not axes or any(a not in (0, 1) for a in axes):
        raise ValueError(f"axes must be a non-empty subset of (0, 1), got {axes}")
    if axes == (0, 1):
        if field.axis_a.kind != field.axis_b.kind:
            raise RepresentationError("a 2D transform needs both axes of the same kind")
        if field.axis_a.samples != field.axis_b.samples:
            raise GridError("a 2D transform needs a square grid")
    sign = -1.0 if inverse else 1.0
    values = field.values
    axis_a, axis_b = field.axis_a, field.axis_b
    if 0 in axes:
        out_a = axis_a.conjugate(field.waist)
        values = _dft_matrix(axis_a, out_a, sign) @ values
        axis_a = out_a
    if 1 in axes:
        out_b = axis_b.conjugate(field.waist)
        values = values @ _dft_matrix(axis_b, out_b, sign).T
        axis_b = out_b
    return Field2D(axis_a, axis_b, values, field.waist)
