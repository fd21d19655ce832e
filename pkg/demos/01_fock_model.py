"""Tour of the truncated Fock-space model.

The model space is spanned by normalized monomials e_alpha under the
Gaussian probability measure mu_t.  This script builds a small model,
confirms the basis is orthonormal on the attached quadrature grid,
inspects a coherent state, and evaluates the Berezin transform of the
vacuum projection P_C (which must be a Gaussian bump).
"""

import numpy as np

import fockqha.model as M
from fockqha.model import FockParams, kernel_coefficients, pc_operator
from fockqha.operators import berezin_values

params = FockParams(n=1, t=1.0, D=16, Q=20)
print(f"model: n={params.n}, t={params.t}, D={params.D} -> dim={params.dim}")
print(f"trusted window radius: {params.trusted_radius:.3f}")

# orthonormality of the basis against the quadrature rule
E, B = M._grid_basis(params)
gram = B @ E.T
print(f"orthonormality residual: {np.max(np.abs(gram - np.eye(params.dim))):.2e}")

# a normalized coherent state: coefficients follow a Poisson profile
z0 = 0.8 + 0.4j
k = kernel_coefficients(params, z0)
print(f"coherent state at z0={z0}: norm = {k.norm:.12f}")
degrees = np.arange(6)
profile = np.abs(k.coeffs[:6]) ** 2
print("first coefficient weights:", np.array2string(profile, precision=4))

# Berezin transform of P_C is exactly a width-t Gaussian
A = pc_operator(params)
radii = np.linspace(0.0, 2.0, 5)
vals = berezin_values(A, radii[:, None].astype(complex)).real
print("\nBerezin transform of P_C along the real axis:")
for r, v in zip(radii, vals):
    print(f"  r={r:.2f}: {v:.6f}  (exact {np.exp(-r**2 / params.t):.6f})")
