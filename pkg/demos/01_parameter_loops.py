"""Build the preset loops, check the imaginary-frequency regime, and see a rejection."""

import numpy as np

from geoamp import RegimeError, make_preset_loop, validate_loop

for kind in ("ellipse", "constant-X-wobble"):
    loop = make_preset_loop(kind)
    s = np.linspace(0, 1, 5)
    print(f"{kind}: descriptor {loop.descriptor}")
    print(f"  min(Y^2 - XZ) = {validate_loop(loop):.10f}, omega_min = {loop.omega_min():.6f}")
    print("  omega on s = 0, .25, .5, .75, 1:", np.round(loop.omega_at(s), 6))

# pulling the ellipse centre down to y0 = 1 makes Y^2 - XZ cross zero
try:
    make_preset_loop("ellipse", {"y0": 1.0})
except RegimeError as exc:
    print(f"\nrejected loop: {exc} (s = {exc.s:.6f})")
