from math import comb, factorial, sqrt

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from nlvortex.algebra import (
    ExpansionCoeffs,
    b_coeff,
    decompose,
    dhg_expansion,
    fourier_transform,
    lg_expansion,
    lg_index,
    mode_converter_phases,
    reconstruct,
)
from nlvortex.modes import (
    POSITION,
    WAVEVECTOR,
    Axis,
    GridError,
    LGIndex,
    ModeIndex,
    RepresentationError,
    dhg_field,
    hg_field,
    lg_field,
)

R2 = 1 / sqrt(2)


def modes_up_to(max_order):
    return [ModeIndex(n, N - n) for N in range(max_order + 1) for n in range(N + 1)]


def sympy_b(n, m, j):
    """Coefficient by symbolic differentiation, independent of the integer convolution."""
    t = sympy.Symbol("t")
    deriv = sympy.diff((1 + t) ** n * (1 - t) ** m, t, j).subs(t, 0)
    N = n + m
    pref = sympy.sqrt(sympy.Rational(factorial(N - j) * factorial(j), 2 ** N * factorial(n) * factorial(m)))
    return float(pref * deriv / factorial(j))


# -- b coefficients ----------------------------------------------------------


def test_b_first_order():
    assert b_coeff(1, 0, 0) == pytest.approx(R2)
    assert b_coeff(1, 0, 1) == pytest.approx(R2)
    assert b_coeff(0, 0, 0) == 1


@pytest.mark.parametrize("n", range(7))
def test_b_n0_closed_form(n):
    for j in range(n + 1):
        assert b_coeff(n, 0, j) == pytest.approx(sqrt(comb(n, j) / 2 ** n), abs=1e-15)


@pytest.mark.parametrize("n", range(7))
def test_b_n0_against_overlap_oracle(params, grid, n):
    dhg = dhg_field(ModeIndex(n, 0), params, grid)
    for j in range(n + 1):
        overlap = hg_field(ModeIndex(n - j, j), params, grid).inner(dhg)
        assert abs(overlap - sqrt(comb(n, j) / 2 ** n)) < 1e-6


@pytest.mark.parametrize("idx", modes_up_to(6), ids=str)
def test_b_against_symbolic_derivative(idx):
    for j in range(idx.order + 1):
        assert b_coeff(idx.n, idx.m, j) == pytest.approx(sympy_b(idx.n, idx.m, j), abs=1e-14)


def test_b_index_error():
    with pytest.raises(IndexError):
        b_coeff(1, 1, 3)
    with pytest.raises(IndexError):
        b_coeff(1, 1, -1)


def test_one_over_j_variant_breaks_unitarity():
    # with 1/j in place of 1/j! the squared coefficients of DHG_30 no longer sum to one
    t = sympy.Symbol("t")
    n, N = 3, 3
    total = 0
    for j in range(N + 1):
        deriv = sympy.diff((1 + t) ** n, t, j).subs(t, 0)
        pref = factorial(N - j) * factorial(j) / (2 ** N * factorial(n))
        total += pref * float(deriv / max(j, 1)) ** 2
    assert abs(total - 1) > 0.1
    assert dhg_expansion(ModeIndex(3, 0)).norm_squared() == pytest.approx(1, abs=1e-14)


# -- expansions --------------------------------------------------------------


def test_dhg_expansion_examples(params, grid):
    np.testing.assert_allclose(dhg_expansion(ModeIndex(1, 0)).coeffs, [R2, R2])
    np.testing.assert_allclose(dhg_expansion(ModeIndex(0, 1)).coeffs, [R2, -R2])
    np.testing.assert_allclose(dhg_expansion(ModeIndex(0, 0)).coeffs, [1])
    rec = reconstruct(dhg_expansion(ModeIndex(2, 0)), params, grid).values
    ref = dhg_field(ModeIndex(2, 0), params, grid).values
    assert np.max(np.abs(rec - ref)) < 1e-6 * np.abs(ref).max()


def test_lg_expansion_examples(params, grid):
    np.testing.assert_allclose(lg_expansion(ModeIndex(1, 0)).coeffs, [R2, 1j * R2])
    assert lg_index(ModeIndex(1, 0)) == LGIndex(0, 1)
    np.testing.assert_allclose(lg_expansion(ModeIndex(0, 0)).coeffs, [1])
    rec = reconstruct(lg_expansion(ModeIndex(2, 0)), params, grid).values
    ref = lg_field(LGIndex(0, 2), params, grid).values
    phase = np.vdot(rec, ref) / abs(np.vdot(rec, ref))
    assert np.max(np.abs(rec * phase - ref)) < 1e-6 * np.abs(ref).max()


@pytest.mark.parametrize("idx", modes_up_to(4), ids=str)
def test_lg_sum_matches_closed_form_up_to_sign(params, grid, idx):
    rec = reconstruct(lg_expansion(idx), params, grid).values
    ref = lg_field(lg_index(idx), params, grid).values
    # the two constructions differ by the global sign (-1)^p
    p = min(idx.n, idx.m)
    assert np.max(np.abs((-1) ** p * rec - ref)) < 1e-6 * np.abs(ref).max()


def test_converter_examples():
    out = mode_converter_phases(dhg_expansion(ModeIndex(1, 0)))
    np.testing.assert_allclose(out.coeffs, [R2, 1j * R2])
    e0 = dhg_expansion(ModeIndex(0, 0))
    np.testing.assert_array_equal(mode_converter_phases(e0).coeffs, e0.coeffs)
    e2 = dhg_expansion(ModeIndex(2, 0))
    twice = mode_converter_phases(mode_converter_phases(e2)).coeffs
    b = e2.coeffs
    # i^(2j) alternates the sign: [b0, -b1, b2]
    np.testing.assert_allclose(twice, [b[0], -b[1], b[2]], atol=1e-15)


@pytest.mark.parametrize("idx", modes_up_to(8), ids=str)
def test_converter_maps_dhg_to_lg(idx):
    np.testing.assert_allclose(
        mode_converter_phases(dhg_expansion(idx)).coeffs, lg_expansion(idx).coeffs, atol=1e-12, rtol=0
    )


@given(st.integers(0, 10), st.integers(0, 10))
def test_expansions_unitary(n, m):
    idx = ModeIndex(n, m)
    assert abs(dhg_expansion(idx).norm_squared() - 1) < 1e-10
    assert abs(lg_expansion(idx).norm_squared() - 1) < 1e-10


def test_expansion_length_checked():
    with pytest.raises(ValueError):
        ExpansionCoeffs(2, [1, 0])


# -- decomposition -----------------------------------------------------------


def test_decompose_hg11(params, grid):
    d = decompose(hg_field(ModeIndex(1, 1), params, grid), 4)
    for idx, c in d.coeffs.items():
        assert abs(c - (1 if idx == ModeIndex(1, 1) else 0)) < 1e-6
    assert d.residual < 1e-6


def test_decompose_lg01(params, grid):
    d = decompose(lg_field(LGIndex(0, 1), params, grid), 2)
    assert abs(d[1, 0] - R2) < 1e-6
    assert abs(d[0, 1] - 1j * R2) < 1e-6


def test_decompose_dhg30(params, grid):
    d = decompose(dhg_field(ModeIndex(3, 0), params, grid), 3)
    for j in range(4):
        assert abs(d[3 - j, j] - b_coeff(3, 0, j)) < 1e-6


@pytest.mark.parametrize("idx", modes_up_to(4), ids=str)
def test_decompose_matches_expansion(params, grid, idx):
    d = decompose(dhg_field(idx, params, grid), idx.order)
    exact = dhg_expansion(idx).coeffs
    numeric = np.array([d[idx.order - j, j] for j in range(idx.order + 1)])
    assert np.max(np.abs(numeric - exact)) < 1e-6


def test_decompose_rejects_negative_order(params, grid):
    with pytest.raises(ValueError):
        decompose(hg_field(ModeIndex(0, 0), params, grid), -1)


# -- Fourier transform -------------------------------------------------------


def test_fourier_gaussian(params, grid):
    f = hg_field(ModeIndex(0, 0), params, grid)
    F = fourier_transform(f)
    assert F.kinds == (WAVEVECTOR, WAVEVECTOR)
    ref = hg_field(ModeIndex(0, 0), params, (F.axis_a, F.axis_b)).values
    assert np.max(np.abs(F.values - ref)) < 1e-8 * np.abs(ref).max()


@pytest.mark.parametrize("n", range(5))
def test_fourier_1d_slices(params, grid, n):
    f = hg_field(ModeIndex(n, 0), params, grid)
    F = fourier_transform(f, axes=(0,))
    assert F.kinds == (WAVEVECTOR, POSITION)
    ref = hg_field(ModeIndex(n, 0), params, (F.axis_a, F.axis_b), allow_mixed=True).values
    assert np.max(np.abs(F.values - 1j ** n * ref)) < 1e-6 * np.abs(ref).max()


@pytest.mark.parametrize("idx", modes_up_to(6), ids=str)
def test_fourier_eigenvalue_overlap(params, grid, idx):
    f = hg_field(idx, params, grid)
    F = fourier_transform(f)
    basis = hg_field(idx, params, (F.axis_a, F.axis_b))
    assert abs(basis.inner(F) - 1j ** idx.order) < 1e-6
    assert abs(F.norm() - f.norm()) < 1e-10


def test_fourier_wavevector_to_position_round_trip(params):
    ax = Axis.centered(WAVEVECTOR, params.waist, samples=257)
    f = lg_field(LGIndex(1, 2), params, (ax, ax))
    back = fourier_transform(fourier_transform(f), inverse=True)
    assert back.kinds == (WAVEVECTOR, WAVEVECTOR)
    assert np.max(np.abs(back.values - f.values)) < 1e-10 * np.abs(f.values).max()


def test_fourier_grid_errors(params):
    a = Axis.centered(POSITION, params.waist, samples=65)
    b = Axis.centered(POSITION, params.waist, samples=33)
    f = hg_field(ModeIndex(0, 0), params, (a, b))
    with pytest.raises(GridError):
        fourier_transform(f)
    mixed = hg_field(ModeIndex(0, 0), params, (a, a.conjugate(params.waist)), allow_mixed=True)
    with pytest.raises(RepresentationError):
        fourier_transform(mixed)
