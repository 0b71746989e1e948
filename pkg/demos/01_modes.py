"""Hermite-Gaussian, Laguerre-Gaussian and diagonal HG modes on a grid.

Run from the repository root: python demos/01_modes.py
Images land in demo-out/ as PGM files (any image viewer opens them).
"""

import numpy as np

from nlvortex.io import export_field
from nlvortex.modes import BeamParams, LGIndex, ModeIndex, default_grid, dhg_field, hg_field, lg_field

params = BeamParams(wavelength=810e-9, waist=1e-3)
grid = default_grid(params)  # ±6 waists, 513 points per axis
print(f"grid: {grid[0].samples}^2 points, spacing {grid[0].spacing * 1e6:.1f} um")

# every generated mode is unit-norm on the grid
for idx in (ModeIndex(0, 0), ModeIndex(2, 1), ModeIndex(3, 3)):
    f = hg_field(idx, params, grid)
    print(f"HG_{idx.n}{idx.m}: norm = {f.norm():.12f}")

# LG^l_p has a dark core whenever l != 0
lg = lg_field(LGIndex(0, 2), params, grid)
centre = np.abs(lg.values[256, 256]) ** 2
print(f"LG^2_0 central intensity / peak = {centre / np.max(np.abs(lg.values) ** 2):.1e}")

# DHG modes are HG modes in 45-degree rotated coordinates
dhg = dhg_field(ModeIndex(1, 0), params, grid)
sum_10_01 = (hg_field(ModeIndex(1, 0), params, grid).values + hg_field(ModeIndex(0, 1), params, grid).values) / np.sqrt(2)
print(f"max |DHG_10 - (HG_10 + HG_01)/sqrt2| = {np.max(np.abs(dhg.values - sum_10_01)):.1e}")

for name, field in (("hg_21", hg_field(ModeIndex(2, 1), params, grid)), ("lg_0_2", lg), ("dhg_10", dhg)):
    paths = export_field(field, f"demo-out/{name}")
    print("wrote", ", ".join(str(p) for p in paths))
