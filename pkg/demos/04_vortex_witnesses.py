"""Reading a vortex off a field: winding number and radial profile."""

import numpy as np

from nlvortex.biphoton import CrystalSpec, PumpSpec, apply_nonlocal_converter, build_state, coincidence_map
from nlvortex.modes import BeamParams, LGIndex, ModeIndex, default_grid, lg_field
from nlvortex.vortex import WindingError, radial_profile, winding

params = BeamParams(810e-9, 1e-3)
grid = default_grid(params)

# the winding number does not depend on the loop radius
field = lg_field(LGIndex(0, -3), params, grid)
for r in (0.5, 1.0, 1.5):
    w = winding(field, r * params.waist)
    print(f"LG^-3_0, loop radius {r} w: {w.turns:+.6f} turns")

# a loop through a zero has no well-defined winding
try:
    winding(lg_field(LGIndex(1, 0), params, grid), params.waist / np.sqrt(2))
except WindingError as exc:
    print("LG^0_1 on its nodal ring:", exc)

# the non-local doughnut: azimuthally averaged coincidences
pump = PumpSpec(ModeIndex(1, 0), 405e-9, 1e-3)
cmap = coincidence_map(apply_nonlocal_converter(build_state(pump, CrystalSpec(2e-3))), "x")
prof = radial_profile(cmap, 48)
peak = prof[np.nanargmax(prof[:, 1]), 0]
print(f"ring radius {peak / cmap.waist:.3f} waists (LG^1_0 peaks at 1/sqrt2 = {1 / np.sqrt(2):.3f})")
for r, v in prof[:12:2]:
    print(f"  r = {r / cmap.waist:5.3f} w   {'#' * int(60 * v / np.nanmax(prof[:, 1]))}")
