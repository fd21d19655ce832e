"""Weyl operators, Toeplitz quantization and the heat transform.

Demonstrates the commutation relation W_z W_w = phase * W_{z+w} on the
trusted sub-block, the diagonal Toeplitz matrix of |w|^2, and the fact
that the Berezin transform of a Toeplitz operator is the heat transform
of its symbol.
"""

import numpy as np

from fockqha.model import FockParams, degree_projector, operator_norm_2
from fockqha.operators import berezin_values, heat_values, toeplitz, weyl
from fockqha.symbols import Gaussian, Polynomial

params = FockParams(n=1, t=1.0, D=24, Q=28)

# commutation relation on the trusted sub-block
z, w = 0.5, 0.25 + 0.25j
phase = np.exp(-1j * np.imag(z * np.conj(w)) / params.t)
diff = weyl(params, z) @ weyl(params, w) - phase * weyl(params, z + w)
proj = degree_projector(params, params.D // 2)
print(f"commutation residual (projected): {operator_norm_2(proj @ diff @ proj):.2e}")

# T_{|w|^2} is diagonal with entries t(k+1)
T = toeplitz(params, Polynomial(terms=[((1,), (1,), 1.0)]))
diag = np.real(np.diag(T.matrix)[:6])
print("T_{|w|^2} leading diagonal:", np.array2string(diag, precision=6))
print("expected:                  ", np.array2string(params.t * np.arange(1.0, 7.0)))

# Berezin transform of T_f equals the heat transform of f
f = Gaussian(center=0.3, width=2.0)
A = toeplitz(params, f)
pts = np.array([0.0, 0.4 - 0.2j, 0.8])[:, None]
bere = berezin_values(A, pts)
heat = heat_values(f, params.t, pts, Q=params.Q)
print(f"\nberezin(T_f) vs heat transform of f: max diff {np.max(np.abs(bere - heat)):.2e}")
