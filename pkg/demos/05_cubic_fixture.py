"""A square-integrable eigenfunction of q^3 p + p q^3 with a purely imaginary eigenvalue."""

from geoamp import cubic_operator_check

for lam in (0.5, 1.0, 2.0):
    rep = cubic_operator_check(lam)
    print(f"lambda={lam}: residual {rep.residual:.2e}, "
          f"int_0^inf chi^2 = {rep.half_line_norm:.12f} (1/lambda = {1 / lam:.12f})")
