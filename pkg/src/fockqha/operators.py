"""Weyl operators, Toeplitz operators, Berezin and heat transforms.

All matrix elements are obtained by Gaussian quadrature of the defining
integrals on the model grid.  The closed-form (Laguerre-type) expression
for Weyl matrix elements is used only as a cross-check in the tests,
never as the implementation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    FockOperator,
    FockParams,
    _grid_basis,
    basis_matrix,
    kernel_coefficients,
    multi_indices,
)
from .symbols import CallableSymbol, GridSymbol, Symbol

# Weyl matrices are heavily reused by convolution sweeps; cache by (params, z).
_WEYL_CACHE: dict = {}
_WEYL_CACHE_MAX = 20000


def weyl(params: FockParams, z) -> FockOperator:
    """Matrix of the Weyl operator W_z f(w) = k_z(w) f(w - z).

    W_0 is the identity; on the trusted sub-block (degrees <= D/2) the
    matrix is an isometry up to truncation.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    key = (params, tuple(z.tolist()))
    hit = _WEYL_CACHE.get(key)
    if hit is not None:
        return hit
    grid = params.grid()
    E, B = _grid_basis(params)
    # k_z at the nodes
    kvals = np.exp(
        (grid.nodes @ np.conj(z)) / params.t - np.sum(np.abs(z) ** 2) / (2.0 * params.t)
    )
    Es = basis_matrix(params, grid.nodes - z[None, :])
    W = (B * kvals) @ Es.T
    op = FockOperator(params, W)
    if len(_WEYL_CACHE) < _WEYL_CACHE_MAX:
        _WEYL_CACHE[key] = op
    return op


def alpha_op(A: FockOperator, z) -> FockOperator:
    """Conjugation by Weyl operators: alpha_z(A) = W_z A W_{-z}."""
    Wz = weyl(A.params, z)
    Wmz = weyl(A.params, -np.atleast_1d(np.asarray(z, dtype=complex)))
    return FockOperator(A.params, Wz.matrix @ A.matrix @ Wmz.matrix)


def toeplitz(params: FockParams, f) -> FockOperator:
    """Toeplitz matrix M[a, b] = integral of f e_b conj(e_a) dmu_t.

    f may be a Symbol or any vectorized callable on (P, n) points.
    Real-valued f gives a Hermitian matrix to roundoff; f == c gives
    c * identity.
    """
    grid = params.grid()
    E, B = _grid_basis(params)
    fvals = np.asarray(f(grid.nodes) if isinstance(f, Symbol) else f(grid.nodes))
    if not np.all(np.isfinite(fvals)):
        i = int(np.argmax(~np.isfinite(fvals)))
        raise ValueError(f"non-finite symbol value at node {grid.nodes[i]}")
    return FockOperator(params, (B * fvals) @ E.T)


def berezin_values(A: FockOperator, points: np.ndarray) -> np.ndarray:
    """Berezin transform values A~(z) = <A k_z, k_z> at the given points.

    The truncated coherent states are renormalized to unit norm, so the
    contraction |A~| <= ||A||_op holds at every point and the transform
    of the identity is exactly 1 everywhere; inside the trusted window
    this agrees with the raw coefficient contraction up to the (tiny)
    truncation defect.
    """
    points = np.atleast_2d(np.asarray(points, dtype=complex))
    params = A.params
    # kernel coefficient columns for all points at once
    E = basis_matrix(params, points)
    weights = np.exp(-np.sum(np.abs(points) ** 2, axis=1) / (2.0 * params.t))
    C = np.conj(E) * weights  # C[:, i] = coefficients of k_{z_i}
    raw = np.einsum("ji,jk,ki->i", np.conj(C), A.matrix, C, optimize=True)
    norms = np.sum(np.abs(C) ** 2, axis=0)
    return raw / norms


class BerezinSymbol(Symbol):
    """Exact Berezin transform of an operator as an evaluable symbol."""

    def __init__(self, A: FockOperator):
        self.A = A
        self.n = A.params.n

    def eval(self, points):
        return berezin_values(self.A, points)


def berezin(A: FockOperator, window: float | None = None, m: int = 61) -> GridSymbol:
    """Berezin transform sampled on a grid over the (default: trusted) window.

    Values outside the trusted window are computed but carry growing
    truncation bias; keep |z| below params.trusted_radius for trusted use.
    """
    if window is None:
        window = A.params.trusted_radius
    return GridSymbol.sample(BerezinSymbol(A), window, m, n=A.params.n)


@dataclass
class HeatTransformResult:
    """Gaussian smoothing of a symbol: the heat/Berezin transform at weight t."""

    symbol: GridSymbol
    t: float
    source: Symbol


def heat_values(f, t: float, points: np.ndarray, n: int = 1, Q: int = 40) -> np.ndarray:
    """Heat transform values (pi t)^{-n} integral f(w) exp(-|z-w|^2/t) dV(w).

    Substituting w = z + u turns this into an average of f(z + u)
    against mu_t(u), evaluated by Gauss-Hermite quadrature.
    """
    from .quadrature import gaussian_grid

    points = np.atleast_2d(np.asarray(points, dtype=complex))
    grid = gaussian_grid(n, t, Q)
    out = np.empty(points.shape[0], dtype=complex)
    for i, z in enumerate(points):
        vals = np.asarray(f(grid.nodes + z[None, :]))
        out[i] = np.sum(grid.weights * vals)
    return out


def heat_transform(
    f: Symbol, t: float, window: float = 6.0, m: int = 61, Q: int = 40
) -> HeatTransformResult:
    """Heat transform of a symbol, returned on a sampling grid.

    Satisfies berezin(toeplitz(f)) == heat_transform(f, t) within
    quadrature and truncation tolerance.
    """
    n = f.n
    sym = GridSymbol.sample(
        CallableSymbol(lambda pts: heat_values(f, t, pts, n=n, Q=Q), n=n), window, m, n=n
    )
    return HeatTransformResult(symbol=sym, t=t, source=f)


def weyl_matrix_closed_form(params: FockParams, z) -> np.ndarray:
    """Series closed form for Weyl matrix elements (test oracle only).

    <W_z e_b, e_a> = exp(-|z|^2/2t) sqrt(a! t^{|a|} / (b! t^{|b|}))
        * prod_axes sum_j C(b, j) (-z)^{b-j} (conj z / t)^{a-j} / (a-j)!
    obtained by expanding k_z and the shifted monomial.
    """
    import math

    z = np.atleast_1d(np.asarray(z, dtype=complex))
    idx = multi_indices(params)
    d = params.dim
    M = np.zeros((d, d), dtype=complex)
    pref = np.exp(-np.sum(np.abs(z) ** 2) / (2.0 * params.t))

    def axis_sum(a, b, za):
        s = 0.0 + 0j
        for j in range(min(a, b) + 1):
            s += (
                math.comb(b, j)
                * (-za) ** (b - j)
                * (np.conj(za) / params.t) ** (a - j)
                / math.factorial(a - j)
            )
        return s

    for ia, alpha in enumerate(idx):
        for ib, beta in enumerate(idx):
            ratio = 1.0
            for ax in range(params.n):
                ratio *= math.factorial(alpha[ax]) * params.t ** alpha[ax]
                ratio /= math.factorial(beta[ax]) * params.t ** beta[ax]
            term = pref * np.sqrt(ratio)
            for ax in range(params.n):
                term *= axis_sum(alpha[ax], beta[ax], z[ax])
            M[ia, ib] = term
    return M
