"""Quadrature on C^n ~ R^{2n}.

Two families of grids are provided:

* Gaussian grids for the probability measure
  dmu_t(z) = (pi t)^{-n} exp(-|z|^2 / t) dV(z),
  built from tensorized Gauss-Hermite rules.  Polynomials in
  (z, conj z) of total degree <= 2Q - 1 are integrated exactly.
* Windowed Lebesgue grids for dV restricted to [-W, W]^{2n},
  built from tensorized Gauss-Legendre rules (spectral accuracy
  for the smooth Gaussian-type integrands used throughout).

All grids are immutable and all integration is a plain deterministic
weighted sum, so results are reproducible bit-for-bit.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np


@dataclass(frozen=True)
class GaussGrid:
    """Quadrature nodes in C^n with positive weights.

    nodes has shape (P, n) complex; weights has shape (P,).
    measure is a human-readable tag, e.g. "gaussian(t=1.0)" or
    "lebesgue(W=8.0, m=40)".
    """

    nodes: np.ndarray
    weights: np.ndarray
    measure: str

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.ascontiguousarray(self.nodes))
        object.__setattr__(self, "weights", np.ascontiguousarray(self.weights, dtype=float))
        if self.nodes.ndim != 2 or self.nodes.shape[0] != self.weights.shape[0]:
            raise ValueError("nodes must be (P, n) and weights (P,)")

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    def to_csv(self, path) -> None:
        """Dump nodes and weights for audit (one row per node)."""
        n = self.nodes.shape[1]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            header = []
            for a in range(n):
                header += [f"re_z{a}", f"im_z{a}"]
            writer.writerow(header + ["weight"])
            for i in range(self.size):
                row = []
                for a in range(n):
                    row += [repr(self.nodes[i, a].real), repr(self.nodes[i, a].imag)]
                writer.writerow(row + [repr(self.weights[i])])


def _tensorize(nodes_1d: np.ndarray, weights_1d: np.ndarray, n: int):
    """Tensor a 1-d real rule over the 2n real axes of C^n."""
    axes = [nodes_1d] * (2 * n)
    mesh = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([m.ravel() for m in mesh], axis=-1)  # (P, 2n)
    w = reduce(np.multiply.outer, [weights_1d] * (2 * n)).ravel()
    z = coords[:, 0::2] + 1j * coords[:, 1::2]
    return z, w


@lru_cache(maxsize=64)
def gaussian_grid(n: int, t: float, Q: int) -> GaussGrid:
    """Tensor Gauss-Hermite grid for the Gaussian probability measure mu_t.

    Order Q per real axis; exact for monomials z^a conj(z)^b with
    |a| + |b| <= 2Q - 1.
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")
    x, w = np.polynomial.hermite.hermgauss(Q)
    # substitute u = x / sqrt(t): weight exp(-u^2/t) du / sqrt(pi t)
    nodes = np.sqrt(t) * x
    weights = w / np.sqrt(np.pi)
    z, wt = _tensorize(nodes, weights, n)
    return GaussGrid(z, wt, measure=f"gaussian(t={t})")


@lru_cache(maxsize=64)
def lebesgue_grid(W: float, m: int, n: int) -> GaussGrid:
    """Tensor Gauss-Legendre grid for dV on the window [-W, W]^{2n}."""
    if m < 2:
        raise ValueError("m must be >= 2")
    if W <= 0:
        raise ValueError("W must be positive")
    x, w = np.polynomial.legendre.leggauss(m)
    nodes = W * x
    weights = W * w
    z, wt = _tensorize(nodes, weights, n)
    return GaussGrid(z, wt, measure=f"lebesgue(W={W}, m={m})")


def default_window(t: float, D: int) -> float:
    """Window covering the reliable Fock region plus Gaussian tails."""
    return float(np.sqrt(t * (D + 4)) + 3.0 * np.sqrt(t))


def integrate(grid: GaussGrid, f) -> complex:
    """Weighted sum of f over the grid nodes.

    f may be any callable accepting an array of points (P, n) and
    returning (P,) values.  A non-finite value aborts with the
    offending node in the message; NaNs never propagate silently.
    """
    vals = np.asarray(f(grid.nodes))
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ValueError(f"non-finite integrand value at node {grid.nodes[i]}")
    return complex(np.sum(grid.weights * vals))
