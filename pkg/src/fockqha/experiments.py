"""Experiment runners for the analytic claims.

Three families of desk-scale experiments:

* quantization sweeps: semiclassical limits ||T_f T_g - T_{fg}|| -> 0
  and ||fg - heat(fg)||_inf -> 0 as t -> 0, rebuilding the model per t;
* compactness diagnostics: Berezin decay profiles on circles, together
  with the singular-value list (truncation makes every matrix compact,
  so only the decay profile is diagnostic);
* invariance checks: residuals of alpha_w(T_f) = T_f on the trusted
  sub-block for symbols invariant under a subgroup of translations,
  with a radial negative control.

Each runner returns plain records and can emit a CSV plus a JSON
metadata sidecar.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .approximation import ApproximationReport, toeplitz_approximation
from .model import (
    FockOperator,
    FockParams,
    degree_projector,
    operator_norm_2,
    singular_values,
)
from .operators import berezin_values, heat_values, toeplitz, weyl, alpha_op
from .symbols import Symbol, SymbolProduct

SCHEMA_VERSION = "1"


@dataclass
class SweepRecord:
    """One measured point of a parameter sweep."""

    parameter: float
    quantity: float
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.quantity < 0:
            raise ValueError("measured quantities are non-negative")

    def as_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "quantity": self.quantity,
            "metadata": self.metadata,
        }


def _params_dict(params: FockParams) -> dict:
    return {"n": params.n, "t": params.t, "D": params.D, "Q": params.Q}


def write_sweep_csv(records: list, path, columns=("parameter", "quantity")) -> None:
    """Two-column CSV of a sweep; values serialized with repr for exactness."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for r in records:
            writer.writerow([repr(float(r.parameter)), repr(float(r.quantity))])


def write_sidecar(path, payload: dict) -> None:
    """JSON metadata sidecar with the shared schema version."""
    doc = {"schema": SCHEMA_VERSION}
    doc.update(payload)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _trusted_points(params: FockParams, m: int = 21) -> np.ndarray:
    """A deterministic sampling grid covering the trusted window (n = 1)."""
    r = params.trusted_radius / np.sqrt(2.0)
    ax = np.linspace(-r, r, m)
    X, Y = np.meshgrid(ax, ax, indexing="ij")
    pts = (X + 1j * Y).ravel()[:, None]
    if params.n > 1:
        pad = np.zeros((pts.shape[0], params.n - 1), dtype=complex)
        pts = np.concatenate([pts, pad], axis=1)
    return pts


def quantization_sweep(
    f: Symbol, g: Symbol, t_list, base: FockParams, m: int = 21
) -> tuple[list, list]:
    """Semiclassical quantization errors per weight t.

    For each t the model is rebuilt from scratch (basis, quadrature,
    operators); no cross-t state survives.  Returns two record lists:
    the operator-norm deficiency ||T_f T_g - T_{fg}||_op and the heat
    sup-norm deficiency max |fg - heat(fg, t)| over the trusted window.
    """
    fg = SymbolProduct([f, g])
    op_records, sup_records = [], []
    for t in t_list:
        params = FockParams(base.n, float(t), base.D, base.Q)
        Tf = toeplitz(params, f)
        Tg = toeplitz(params, g)
        Tfg = toeplitz(params, fg)
        op_err = operator_norm_2(Tf @ Tg - Tfg)
        pts = _trusted_points(params, m)
        smoothed = heat_values(fg, params.t, pts, n=params.n, Q=params.Q)
        sup_err = float(np.max(np.abs(fg(pts) - smoothed)))
        meta = {"params": _params_dict(params)}
        op_records.append(SweepRecord(float(t), op_err, meta))
        sup_records.append(SweepRecord(float(t), sup_err, meta))
    return op_records, sup_records


@dataclass
class CompactnessDiagnostic:
    """Berezin decay profile on circles plus the singular-value list."""

    radii: np.ndarray
    profile: np.ndarray  # max |A~| per circle
    svals: np.ndarray

    def records(self) -> list:
        return [
            SweepRecord(float(r), float(p)) for r, p in zip(self.radii, self.profile)
        ]


def compactness_diagnostic(
    A: FockOperator, radii, samples_per_circle: int = 64
) -> CompactnessDiagnostic:
    """Max of |A~| on circles of the given radii (radii inside the window).

    A decaying profile is the numerical witness of a C_0 Berezin
    transform; the singular values are reported alongside but carry no
    compactness information on a truncated space.
    """
    radii = np.asarray(radii, dtype=float)
    if np.any(radii > A.params.trusted_radius + 1e-12):
        raise ValueError("all radii must lie inside the trusted window")
    theta = 2.0 * np.pi * np.arange(samples_per_circle) / samples_per_circle
    profile = np.empty(radii.shape[0])
    for i, r in enumerate(radii):
        ring = r * np.exp(1j * theta)[:, None]
        if A.params.n > 1:
            pad = np.zeros((ring.shape[0], A.params.n - 1), dtype=complex)
            ring = np.concatenate([ring, pad], axis=1)
        profile[i] = float(np.max(np.abs(berezin_values(A, ring))))
    return CompactnessDiagnostic(radii=radii, profile=profile, svals=singular_values(A))


def invariance_check(
    f: Symbol, params: FockParams, directions, magnitudes
) -> float:
    """Max residual of alpha_w(T_f) = T_f over w = lambda * direction.

    The residual is the spectral norm of the projected difference on
    the trusted sub-block (degrees <= D/2); the full truncated matrices
    cannot commute with translations at the top degrees.
    """
    Tf = toeplitz(params, f)
    proj = degree_projector(params, params.D // 2)
    worst = 0.0
    for direction in directions:
        d = np.atleast_1d(np.asarray(direction, dtype=complex))
        for lam in magnitudes:
            moved = alpha_op(Tf, lam * d)
            res = operator_norm_2(proj @ (moved - Tf) @ proj)
            worst = max(worst, res)
    return worst


def ccr_weyl_approximation(z0, params: FockParams, stages) -> ApproximationReport:
    """Theorem A applied to a Weyl operator: W_{z0} as a Toeplitz limit."""
    z = np.atleast_1d(np.asarray(z0, dtype=complex))
    if np.sqrt(np.sum(np.abs(z) ** 2)) > params.trusted_radius:
        raise ValueError("z0 must lie inside the trusted window")
    A = weyl(params, z)
    return toeplitz_approximation(A, list(stages), target=f"weyl z0={z0}")
