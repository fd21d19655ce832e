"""Self-describing data files for operators, vectors and spectra.

Operators travel as JSON documents carrying the model parameters, the
ordered multi-index basis, and the matrix entries as (re, im) pairs, so
a file can be validated and reloaded without out-of-band context.
Vectors and singular-value lists export to CSV.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .model import FockOperator, FockParams, FockVector, multi_indices, singular_values

SCHEMA_VERSION = "1"


def operator_to_dict(A: FockOperator, extra: dict | None = None) -> dict:
    """JSON-ready dictionary for an operator, schema version included."""
    p = A.params
    doc = {
        "schema": SCHEMA_VERSION,
        "kind": "fock-operator",
        "params": {"n": p.n, "t": p.t, "D": p.D, "Q": p.Q},
        "basis": [list(alpha) for alpha in multi_indices(p)],
        "entries": [
            [[v.real, v.imag] for v in row] for row in A.matrix
        ],
    }
    if extra:
        doc["meta"] = extra
    return doc


def save_operator(A: FockOperator, path, extra: dict | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(operator_to_dict(A, extra), fh, sort_keys=True)
        fh.write("\n")


def load_operator(path) -> FockOperator:
    """Reload an operator document, validating shape and basis order."""
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("kind") != "fock-operator":
        raise ValueError("not an operator document")
    p = doc["params"]
    params = FockParams(int(p["n"]), float(p["t"]), int(p["D"]), int(p["Q"]))
    basis = tuple(tuple(a) for a in doc["basis"])
    if basis != multi_indices(params):
        raise ValueError("basis order in file does not match the model order")
    entries = np.asarray(doc["entries"], dtype=float)
    if entries.shape != (params.dim, params.dim, 2):
        raise ValueError("entry array has the wrong shape")
    return FockOperator(params, entries[..., 0] + 1j * entries[..., 1])


def vector_to_csv(v: FockVector, path) -> None:
    """CSV rows (multi-index, re, im) in basis order."""
    idx = multi_indices(v.params)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["alpha", "re", "im"])
        for alpha, c in zip(idx, v.coeffs):
            writer.writerow([" ".join(map(str, alpha)), repr(c.real), repr(c.imag)])


def singular_values_to_csv(A: FockOperator, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "sigma"])
        for i, s in enumerate(singular_values(A)):
            writer.writerow([i, repr(float(s))])
