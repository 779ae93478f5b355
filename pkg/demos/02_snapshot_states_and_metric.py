"""Snapshot eigenstates are not square integrable, yet orthonormal under the metric."""

import numpy as np

from geoamp import ParameterPoint, SingularPairingError, gram_matrix, snapshot_state
from geoamp.spectral import eigen_residual, inner_plain

p = ParameterPoint(3.0, 2.0, 1.0)
ground = snapshot_state(p, 0)
print(f"Gaussian width of the ground state at {p.as_tuple()}: a = {ground.a}")
print("|psi_0(q)| at q = 0, 2, 4:", np.abs(ground([0.0, 2.0, 4.0])), "(no decay)")

try:
    inner_plain(ground, ground)
except SingularPairingError as exc:
    print("plain L2 pairing:", exc)

for n in range(4):
    print(f"n={n}: eigenvalue residual {eigen_residual(p, n):.2e}")

G = gram_matrix(p, 6)
print(f"metric Gram matrix of six levels: max |G - I| = {np.abs(G - np.eye(6)).max():.2e}")
