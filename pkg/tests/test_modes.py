import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from nlvortex.algebra import b_coeff
from nlvortex.modes import (
    POSITION,
    WAVEVECTOR,
    Axis,
    BeamParams,
    Field2D,
    GridError,
    LGIndex,
    ModeIndex,
    RepresentationError,
    dhg_field,
    hermite_gauss_1d,
    hermite_poly,
    hg_field,
    laguerre_poly,
    lg_field,
)


def all_modes(max_order):
    return [ModeIndex(n, N - n) for N in range(max_order + 1) for n in range(N + 1)]


# -- polynomials -------------------------------------------------------------


def test_hermite_examples():
    assert hermite_poly(0, 3.7) == 1
    assert hermite_poly(1, 0.5) == 1.0
    x = sympy.Symbol("x")
    assert hermite_poly(2, 2.0) == pytest.approx(float(sympy.hermite(2, x).subs(x, 2)))
    assert hermite_poly(2, 2.0) == pytest.approx(14.0)


@pytest.mark.parametrize("x", [-1.3, 0.0, 2.5])
def test_laguerre_examples(x):
    assert laguerre_poly(0, 3, x) == 1
    assert laguerre_poly(1, 0, 2.0) == pytest.approx(-1.0)
    assert laguerre_poly(1, 1, 0.0) == pytest.approx(2.0)


@given(st.integers(0, 12), st.floats(-4, 4))
def test_hermite_matches_scipy(n, x):
    assert hermite_poly(n, x) == pytest.approx(special.eval_hermite(n, x), rel=1e-10, abs=1e-10)


@given(st.integers(0, 10), st.integers(0, 5), st.floats(0, 12))
def test_laguerre_matches_scipy(p, alpha, x):
    assert laguerre_poly(p, alpha, x) == pytest.approx(special.eval_genlaguerre(p, alpha, x), rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("n", range(8))
def test_normalized_hermite_function_matches_polynomial(n):
    s = np.linspace(-3, 3, 41)
    norm = (2 / np.pi) ** 0.25 / np.sqrt(2.0 ** n * special.factorial(n))
    expected = norm * hermite_poly(n, np.sqrt(2) * s) * np.exp(-s * s)
    np.testing.assert_allclose(hermite_gauss_1d(n, s), expected, atol=1e-13)


# -- axes and fields ---------------------------------------------------------


def test_axis_validation():
    with pytest.raises(GridError):
        Axis(POSITION, 1, 0.0, 1.0)
    with pytest.raises(GridError):
        Axis(POSITION, 8, 1.0, 1.0)
    with pytest.raises(ValueError):
        BeamParams(0.0, 1e-3)
    with pytest.raises(ValueError):
        ModeIndex(-1, 0)


def test_field_is_immutable(params, grid):
    f = hg_field(ModeIndex(0, 0), params, grid)
    with pytest.raises(ValueError):
        f.values[0, 0] = 1.0


def test_mixed_axes_rejected(params):
    mixed = (Axis.centered(POSITION, params.waist), Axis.centered(WAVEVECTOR, params.waist))
    for build in (hg_field, dhg_field):
        with pytest.raises(RepresentationError):
            build(ModeIndex(1, 0), params, mixed)
    with pytest.raises(RepresentationError):
        lg_field(LGIndex(0, 1), params, mixed)


@pytest.mark.parametrize("kind", [POSITION, WAVEVECTOR])
def test_gaussian_real_positive(params, kind):
    ax = Axis.centered(kind, params.waist)
    f = hg_field(ModeIndex(0, 0), params, (ax, ax))
    assert np.all(f.values.real > 0)
    assert np.max(np.abs(f.values.imag)) == 0


def test_hg10_antisymmetric_in_x(params, grid):
    v = hg_field(ModeIndex(1, 0), params, grid).values
    np.testing.assert_allclose(v[::-1, :], -v, atol=1e-15 * np.abs(v).max())


def test_wavevector_form_matches_unnormalized_envelope(params):
    # H_n(w q_x/√2) H_m(w q_y/√2) exp(-w²|q|²/4), up to the normalization constant
    ax = Axis.centered(WAVEVECTOR, params.waist, samples=65)
    f = hg_field(ModeIndex(2, 1), params, (ax, ax)).values
    qx, qy = np.meshgrid(ax.coords, ax.coords, indexing="ij")
    w = params.waist
    envelope = special.eval_hermite(2, w * qx / np.sqrt(2)) * special.eval_hermite(1, w * qy / np.sqrt(2))
    envelope = envelope * np.exp(-w * w * (qx ** 2 + qy ** 2) / 4)
    ratio = f[envelope != 0] / envelope[envelope != 0]
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-10)


def count_sign_changes(values):
    signs = np.sign(values[np.abs(values) > 1e-12 * np.abs(values).max()])
    return int(np.sum(signs[1:] != signs[:-1]))


def test_hg21_norm_and_zero_counts(params):
    ax = Axis(POSITION, 2001, -6e-3, 6e-3)
    f = hg_field(ModeIndex(2, 1), params, (ax, ax))
    assert abs(f.norm() - 1) < 1e-8
    # cuts off the nodal lines: y = 0.5 w and x = 0.3 w
    iy = np.argmin(np.abs(ax.coords - 0.5e-3))
    ix = np.argmin(np.abs(ax.coords - 0.3e-3))
    assert count_sign_changes(f.values[:, iy].real) == 2
    assert count_sign_changes(f.values[ix, :].real) == 1


def test_gouy_phase(params, grid):
    shifted = BeamParams(params.wavelength, params.waist, gouy_phase=0.3)
    a = hg_field(ModeIndex(2, 1), params, grid).values
    b = hg_field(ModeIndex(2, 1), shifted, grid).values
    np.testing.assert_allclose(b, a * np.exp(-4j * 0.3), atol=1e-15)


def test_lg00_is_gaussian(params, grid):
    lg = lg_field(LGIndex(0, 0), params, grid).values
    hg = hg_field(ModeIndex(0, 0), params, grid).values
    assert np.max(np.abs(lg - hg)) < 1e-10 * np.abs(hg).max()


def test_lg01_superposition(params, grid):
    lg = lg_field(LGIndex(0, 1), params, grid).values
    sup = (hg_field(ModeIndex(1, 0), params, grid).values + 1j * hg_field(ModeIndex(0, 1), params, grid).values)
    sup /= np.sqrt(2)
    assert np.max(np.abs(lg - sup)) < 1e-8 * np.abs(lg).max()


def test_lg02_dark_core():
    params = BeamParams(810e-9, 1e-3)
    ax = Axis.centered(POSITION, params.waist, samples=513)
    v = np.abs(lg_field(LGIndex(0, 2), params, (ax, ax)).values)
    assert v[256, 256] < 1e-12 * v.max()


def test_dhg00_is_gaussian(params, grid):
    a = dhg_field(ModeIndex(0, 0), params, grid).values
    b = hg_field(ModeIndex(0, 0), params, grid).values
    np.testing.assert_allclose(a, b, atol=1e-14 * np.abs(b).max())


def test_dhg_first_order(params, grid):
    hg10 = hg_field(ModeIndex(1, 0), params, grid).values
    hg01 = hg_field(ModeIndex(0, 1), params, grid).values
    dhg10 = dhg_field(ModeIndex(1, 0), params, grid).values
    dhg01 = dhg_field(ModeIndex(0, 1), params, grid).values
    scale = np.abs(hg10).max()
    # the (HG10 + HG01)/√2 superposition is the first-order mode along the diagonal x = y
    assert np.max(np.abs(dhg10 - (hg10 + hg01) / np.sqrt(2))) < 1e-8 * scale
    # the rotated coordinates ((x+y)/√2, (x-y)/√2) make the orthogonal partner antisymmetric
    assert np.max(np.abs(dhg01 - (hg10 - hg01) / np.sqrt(2))) < 1e-8 * scale


def test_dhg20_overlap_with_hg11(params, grid):
    overlap = hg_field(ModeIndex(1, 1), params, grid).inner(dhg_field(ModeIndex(2, 0), params, grid))
    assert abs(overlap - b_coeff(2, 0, 1)) < 1e-6


# -- invariants --------------------------------------------------------------


def test_orthonormality(params):
    ax = Axis.centered(POSITION, params.waist, half_width=6.0, samples=257)
    modes = all_modes(6)
    fields = np.array([hg_field(idx, params, (ax, ax)).values.ravel() for idx in modes])
    gram = np.conj(fields) @ fields.T * ax.spacing ** 2
    assert np.max(np.abs(gram - np.eye(len(modes)))) < 1e-6


@pytest.mark.parametrize("idx", all_modes(6), ids=str)
def test_unit_norm(params, grid, idx):
    for f in (hg_field(idx, params, grid), dhg_field(idx, params, grid)):
        assert abs(f.norm() - 1) < 1e-8
    lg = lg_field(LGIndex.from_mode_index(idx), params, grid)
    assert abs(lg.norm() - 1) < 1e-8


@pytest.mark.parametrize("idx", all_modes(4), ids=str)
def test_parity(params, grid, idx):
    v = hg_field(idx, params, grid).values
    np.testing.assert_allclose(v[::-1, ::-1], (-1) ** idx.order * v, atol=1e-14 * np.abs(v).max())


@pytest.mark.parametrize("l", range(-3, 4))
def test_lg_azimuthal_phase(params, grid, l):
    from nlvortex.vortex import sample

    field = lg_field(LGIndex(0, l), params, grid)
    theta = np.linspace(0, 2 * np.pi, 2001)
    loop = sample(field, np.cos(theta), np.sin(theta))
    unwrapped = np.unwrap(np.angle(loop))
    assert abs((unwrapped[-1] - unwrapped[0]) - 2 * np.pi * l) < 1e-3


@pytest.mark.parametrize("idx", all_modes(4), ids=str)
def test_dhg_equals_expansion_sum(params, grid, idx):
    N = idx.order
    total = sum(
        b_coeff(idx.n, idx.m, j) * hg_field(ModeIndex(N - j, j), params, grid).values for j in range(N + 1)
    )
    d = dhg_field(idx, params, grid).values
    assert np.max(np.abs(d - total)) < 1e-6 * np.abs(d).max()


def test_field2d_shape_checked(params, grid):
    with pytest.raises(GridError):
        Field2D(grid[0], grid[1], np.zeros((3, 3)), params.waist)
