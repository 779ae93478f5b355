"""The geometric amplitude of the ellipse loop from three independent engines.

The connection engine returns exactly half of the contour integral, and the
evolved state carries minus that half.  Both relations are printed here.
"""

from geoamp import (evolve, extract_gamma, gamma_closed_form, gamma_connection,
                    make_preset_loop)
from geoamp.amplitude import evolved_gamma_closed_form

loop = make_preset_loop("ellipse")
slow = loop.with_period(200.0 / loop.omega_min())

for n in (0, 1):
    closed = gamma_closed_form(loop, n).value
    conn = gamma_connection(loop, n, steps=128).real
    dyn = extract_gamma(evolve(slow, n), slow, n)
    print(f"n={n}: contour {closed:+.10f}  connection {conn:+.10f}  "
          f"(ratio {conn / closed:.8f})")
    print(f"      evolved {dyn:+.10f}  closed form of evolved amplitude "
          f"{evolved_gamma_closed_form(loop, n).value:+.10f}")
