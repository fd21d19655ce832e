"""Truncated Fock-space model.

The model space is spanned by the monomial basis
e_alpha(z) = z^alpha / sqrt(alpha! t^{|alpha|}) for all multi-indices
with total degree |alpha| <= D, in graded lexicographic order.  These
are orthonormal with respect to the Gaussian probability measure mu_t,
so vectors are plain coefficient arrays and operators are dense
complex matrices M[a, b] = <A e_b, e_a>.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

from .quadrature import gaussian_grid

# Truncation defect above which kernel_coefficients emits a warning:
# the coherent state at z carries weight outside degrees <= D.
KERNEL_DEFECT_THRESHOLD = 1e-6


@dataclass(frozen=True)
class FockParams:
    """Parameters fixing the truncated model.

    n : complex dimension
    t : Gaussian weight parameter (> 0)
    D : total-degree cutoff; basis = {e_alpha : |alpha| <= D}
    Q : Gauss-Hermite order per real axis (Q >= D + 2 so that
        polynomial integrands of degree <= 2D are exact)
    """

    n: int
    t: float
    D: int
    Q: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.t <= 0:
            raise ValueError("t must be positive")
        if self.D < 0:
            raise ValueError("D must be non-negative")
        if self.Q < self.D + 2:
            raise ValueError("Q must be >= D + 2 for exact polynomial quadrature")

    @property
    def dim(self) -> int:
        return math.comb(self.D + self.n, self.n)

    @property
    def trusted_radius(self) -> float:
        """Radius of the reliable window: |z|^2 <= t*D/4."""
        return math.sqrt(self.t * self.D / 4.0)

    def grid(self):
        """The Gaussian quadrature grid attached to this model."""
        return gaussian_grid(self.n, self.t, self.Q)


def _graded_indices(n: int, D: int):
    """All multi-indices with |alpha| <= D in graded lex order."""
    out = []

    def compositions(total, length):
        if length == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in compositions(total - first, length - 1):
                yield (first,) + rest

    for d in range(D + 1):
        out.extend(compositions(d, n))
    return tuple(out)


@lru_cache(maxsize=128)
def multi_indices(params: FockParams):
    """Ordered basis index list; position map is a bijection."""
    idx = _graded_indices(params.n, params.D)
    assert len(idx) == params.dim
    return idx


@lru_cache(maxsize=128)
def _log_norm_factors(params: FockParams) -> np.ndarray:
    """log of sqrt(alpha! t^{|alpha|}) per basis index."""
    idx = multi_indices(params)
    out = np.empty(len(idx))
    for j, alpha in enumerate(idx):
        s = sum(math.lgamma(a + 1) for a in alpha)
        out[j] = 0.5 * (s + sum(alpha) * math.log(params.t))
    return out


def eval_basis(params: FockParams, alpha, z) -> complex:
    """e_alpha(z) = sqrt(1 / (alpha! t^{|alpha|})) z^alpha for a single point."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    norm = math.exp(
        -0.5 * (sum(math.lgamma(a + 1) for a in alpha) + sum(alpha) * math.log(params.t))
    )
    mono = complex(np.prod([z[a] ** alpha[a] for a in range(params.n)]))
    return norm * mono


def basis_matrix(params: FockParams, points: np.ndarray) -> np.ndarray:
    """Evaluate all basis elements at many points: E[j, i] = e_{alpha_j}(points[i]).

    points: (P, n) complex array.
    """
    points = np.atleast_2d(np.asarray(points, dtype=complex))
    P = points.shape[0]
    idx = multi_indices(params)
    # per-axis power tables z_a^k, k = 0..D
    powers = []
    for a in range(params.n):
        tab = np.empty((params.D + 1, P), dtype=complex)
        tab[0] = 1.0
        for k in range(1, params.D + 1):
            tab[k] = tab[k - 1] * points[:, a]
        powers.append(tab)
    norms = np.exp(-_log_norm_factors(params))
    E = np.empty((len(idx), P), dtype=complex)
    for j, alpha in enumerate(idx):
        row = powers[0][alpha[0]].copy()
        for a in range(1, params.n):
            row *= powers[a][alpha[a]]
        E[j] = norms[j] * row
    return E


@lru_cache(maxsize=128)
def _grid_basis(params: FockParams):
    """Basis values on the Gaussian grid and the weighted conjugate.

    Returns (E, B) with E[j, i] = e_j(node_i) and B = conj(E) * weights,
    so that <f e_b, e_a> = (B * f) @ E.T.
    """
    grid = params.grid()
    E = basis_matrix(params, grid.nodes)
    B = np.conj(E) * grid.weights
    return E, B


@dataclass(frozen=True)
class FockVector:
    """Coefficient vector with respect to the orthonormal basis e_alpha."""

    params: FockParams
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.ascontiguousarray(self.coeffs, dtype=complex)
        if c.shape != (self.params.dim,):
            raise ValueError("coefficient length must equal the basis dimension")
        object.__setattr__(self, "coeffs", c)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other: "FockVector") -> complex:
        _check_params(self.params, other.params)
        return complex(np.vdot(other.coeffs, self.coeffs))


@dataclass(frozen=True)
class FockOperator:
    """Dense matrix M[a, b] = <A e_b, e_a> on the truncated basis."""

    params: FockParams
    matrix: np.ndarray
    flags: tuple = field(default_factory=tuple, compare=False)

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=complex)
        d = self.params.dim
        if m.shape != (d, d):
            raise ValueError("matrix must be dim x dim")
        object.__setattr__(self, "matrix", m)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def __add__(self, other):
        _check_params(self.params, other.params)
        return FockOperator(self.params, self.matrix + other.matrix)

    def __sub__(self, other):
        _check_params(self.params, other.params)
        return FockOperator(self.params, self.matrix - other.matrix)

    def __mul__(self, scalar):
        return FockOperator(self.params, self.matrix * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other):
        _check_params(self.params, other.params)
        return FockOperator(self.params, self.matrix @ other.matrix)

    def adjoint(self) -> "FockOperator":
        return FockOperator(self.params, self.matrix.conj().T)

    def apply(self, v: FockVector) -> FockVector:
        _check_params(self.params, v.params)
        return FockVector(self.params, self.matrix @ v.coeffs)


def _check_params(p1: FockParams, p2: FockParams):
    if p1 != p2:
        raise ValueError("FockParams mismatch between operands")


def basis_vector(params: FockParams, j: int) -> FockVector:
    c = np.zeros(params.dim, dtype=complex)
    c[j] = 1.0
    return FockVector(params, c)


def kernel_coefficients(params: FockParams, z) -> FockVector:
    """Coefficients of the normalized reproducing kernel k_z.

    c_alpha = exp(-|z|^2 / (2t)) conj(e_alpha(z)).  Inside the reliable
    window the Euclidean norm is 1 up to truncation; a large defect
    triggers a warning.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    E = basis_matrix(params, z[None, :])[:, 0]
    c = np.exp(-np.sum(np.abs(z) ** 2) / (2.0 * params.t)) * np.conj(E)
    defect = 1.0 - float(np.sum(np.abs(c) ** 2))
    if defect > KERNEL_DEFECT_THRESHOLD:
        warnings.warn(
            f"kernel truncation defect {defect:.3e} at z={z} exceeds threshold",
            stacklevel=2,
        )
    return FockVector(params, c)


def rank_one(y: FockVector, x: FockVector) -> FockOperator:
    """The operator x (x) y, i.e. f -> <f, y> x; trace = <x, y>."""
    _check_params(y.params, x.params)
    return FockOperator(x.params, np.outer(x.coeffs, np.conj(y.coeffs)))


def pc_operator(params: FockParams) -> FockOperator:
    """Projection onto constants, P = 1 (x) 1 (evaluation at 0)."""
    e0 = basis_vector(params, 0)
    return rank_one(e0, e0)


def parity_matrix(params: FockParams) -> FockOperator:
    """The parity operator Uf(w) = f(-w): diagonal (-1)^{|alpha|}."""
    degrees = np.array([sum(a) for a in multi_indices(params)])
    return FockOperator(params, np.diag((-1.0 + 0j) ** degrees))


def identity_operator(params: FockParams) -> FockOperator:
    return FockOperator(params, np.eye(params.dim, dtype=complex))


def degree_projector(params: FockParams, max_degree: int) -> FockOperator:
    """Orthogonal projection onto the span of degrees <= max_degree."""
    degrees = np.array([sum(a) for a in multi_indices(params)])
    return FockOperator(params, np.diag((degrees <= max_degree).astype(complex)))


def operator_norm_2(A: FockOperator) -> float:
    """Largest singular value (spectral norm on the truncated space)."""
    if not np.any(A.matrix):
        return 0.0
    return float(scipy.linalg.svdvals(A.matrix)[0])


def singular_values(A: FockOperator) -> np.ndarray:
    return scipy.linalg.svdvals(A.matrix)


def schatten_norm(A: FockOperator, p0: float) -> float:
    """l^{p0} norm of the singular values; p0 = 1 is the nuclear norm."""
    if p0 < 1:
        raise ValueError("p0 must be >= 1")
    sv = scipy.linalg.svdvals(A.matrix)
    return float(np.sum(sv**p0) ** (1.0 / p0))


def fock_p_norm(params: FockParams, coeffs: np.ndarray, p: float) -> float:
    """The F_t^p norm of the function with the given basis coefficients.

    Computed by quadrature against mu_{2t/p}, matching the definition
    of the p-Fock space as L^p(mu_{2t/p}) functions.
    """
    grid = gaussian_grid(params.n, 2.0 * params.t / p, max(params.Q, 2))
    E = basis_matrix(params, grid.nodes)
    vals = coeffs @ E
    return float(np.sum(grid.weights * np.abs(vals) ** p) ** (1.0 / p))


def p_operator_norm_lower_bound(
    A: FockOperator, p: float, trials: int, seed: int = 0
) -> float:
    """Sampled lower bound for the operator norm on F_t^p.

    Maximizes ||A g||_p / ||g||_p over random polynomial test vectors
    (plus the constant function).  This is a LOWER bound only and is
    monotone non-decreasing in the number of trials.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not (1.0 < p < np.inf):
        raise ValueError("p must lie in (1, inf)")
    params = A.params
    rng = np.random.default_rng(seed)
    # restrict samples to modest degrees so truncation does not inflate ratios
    degrees = np.array([sum(a) for a in multi_indices(params)])
    mask = degrees <= max(1, params.D // 2)
    best = 0.0
    candidates = [np.where(mask, 1.0 + 0j, 0.0)]
    for _ in range(trials):
        c = rng.standard_normal(params.dim) + 1j * rng.standard_normal(params.dim)
        candidates.append(np.where(mask, c, 0.0))
    for c in candidates:
        denom = fock_p_norm(params, c, p)
        if denom == 0.0:
            continue
        num = fock_p_norm(params, A.matrix @ c, p)
        best = max(best, num / denom)
    return best
