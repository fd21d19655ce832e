"""Experiment runners: semiclassical limits, compactness, invariance.

Runs the quantization sweep (deficiencies vanish as t -> 0), the
Berezin compactness diagnostic (decay profiles on circles), and the
translation-invariance check with its radial negative control.
"""

import numpy as np

from fockqha.experiments import (
    compactness_diagnostic,
    invariance_check,
    quantization_sweep,
)
from fockqha.model import FockParams, identity_operator, kernel_coefficients, rank_one
from fockqha.symbols import Gaussian, Horizontal, Radial

params = FockParams(n=1, t=1.0, D=16, Q=20)

# quantization: ||T_f T_g - T_{fg}|| and the heat sup-norm deficiency
f = Gaussian(center=0.0, width=4.0)
op_recs, sup_recs = quantization_sweep(f, f, [1.0, 0.5, 0.25, 0.125], params)
print("quantization sweep (t, op deficiency, sup deficiency):")
for a, b in zip(op_recs, sup_recs):
    print(f"  t={a.parameter:6.3f}   {a.quantity:.3e}   {b.quantity:.3e}")

# compactness diagnostics: Berezin decay on circles
k0 = kernel_coefficients(params, 0.0)
for name, A in [("rank-one", rank_one(k0, k0)), ("identity", identity_operator(params))]:
    diag = compactness_diagnostic(A, np.linspace(0.0, 1.5, 4))
    prof = np.array2string(diag.profile, precision=4)
    print(f"\n{name}: Berezin profile on circles {prof}")

# invariance: a horizontal symbol commutes with imaginary translations,
# a radial one does not (negative control)
big = FockParams(1, 1.0, 32, 36)
r_h = invariance_check(Horizontal(width=1.0), big, [1j], [0.25, 0.5, 1.0])
r = np.linspace(0.0, 6.0, 25)
r_neg = invariance_check(Radial(radii=r, values=np.exp(-r)), big, [1.0], [0.5, 1.0])
print(f"\nhorizontal symbol invariance residual: {r_h:.2e}")
print(f"radial negative-control residual:      {r_neg:.2e}  (expected large)")
