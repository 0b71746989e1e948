"""The DHG -> LG mode converter as coefficient algebra, checked on a grid.

A DHG mode is a finite sum of same-order HG modes with coefficients b(n, m, j).
Multiplying the j-th coefficient by i^j (a pi/2 Gouy phase difference per
index step) turns the sum into an LG mode with l = n - m.
"""

import numpy as np

from nlvortex.algebra import b_coeff, decompose, dhg_expansion, fourier_transform, lg_expansion, lg_index, mode_converter_phases
from nlvortex.modes import BeamParams, ModeIndex, default_grid, dhg_field, hg_field

params = BeamParams(810e-9, 1e-3)
grid = default_grid(params)
idx = ModeIndex(3, 1)

print("b(3, 1, j):", np.round([b_coeff(3, 1, j) for j in range(5)], 6))
d = decompose(dhg_field(idx, params, grid), idx.order)
print("grid overlaps:", np.round([d[4 - j, j].real for j in range(5)], 6))

converted = mode_converter_phases(dhg_expansion(idx))
print(f"after the converter -> LG index {lg_index(idx)}")
print("matches LG coefficients:", np.allclose(converted.coeffs, lg_expansion(idx).coeffs))

# the unitary DFT has HG modes as eigenfunctions with eigenvalue i^(n+m)
for n, m in ((0, 0), (1, 0), (2, 1), (3, 3)):
    f = hg_field(ModeIndex(n, m), params, grid)
    F = fourier_transform(f)
    ref = hg_field(ModeIndex(n, m), params, (F.axis_a, F.axis_b))
    print(f"F[HG_{n}{m}] overlap with HG_{n}{m}: {complex(np.round(ref.inner(F), 10))}  (i^{n + m} = {1j ** (n + m)})")
