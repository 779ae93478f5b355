"""Slower loops bring the evolved amplitude closer to its adiabatic value like 1/T."""

from geoamp import convergence_study, make_preset_loop
from geoamp.dynamics import adiabatic_periods, fitted_slope

for kind in ("ellipse", "constant-X-wobble"):
    loop = make_preset_loop(kind)
    periods = adiabatic_periods(loop)
    rows = convergence_study(loop, 0, periods)
    print(kind)
    print("  T*omega_min   gamma_dyn        |err vs -closed/2|")
    for factor, r in zip((25, 50, 100, 200), rows):
        print(f"  {factor:>9}   {r['gamma_dyn']:+.9f}  {r['abs_err_evolved']:.3e}")
    print(f"  fitted slope {fitted_slope(periods, [r['abs_err_evolved'] for r in rows]):.3f}")
