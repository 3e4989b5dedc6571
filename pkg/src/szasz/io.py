"""JSON loading of subjects for the sweep and bound-evaluation commands.

Recognized documents (complex numbers are ``[re, im]`` pairs, matrices are
row-major nested lists of pairs)::

    {"coeffs": [...], "factors": [...]?}                 scalar polynomial
    {"coeffs": [...], "factors": [...]?, "matrix": M}    scalar polynomial at a matrix
    {"n": n, "coeffs": [M...], "factors": [M...]?}       matrix polynomial
    {"n": n, "d": d, "A": M, "B": M, "C": M}             realization

Either ``coeffs`` or ``factors`` may be omitted when the other determines it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .linalg import as_matrix, matrix_from_json, matrix_to_json
from .poly import MatrixPoly, ScalarPoly
from .realization import Realization


@dataclass(frozen=True, eq=False)
class FunctionalSubject:
    """A scalar polynomial paired with a matrix argument; sweeps evaluate ``p(lam A)``."""

    p: ScalarPoly
    A: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", as_matrix(self.A, square=True, name="A"))

    def to_json(self) -> dict:
        return dict(self.p.to_json(), matrix=matrix_to_json(self.A))


Subject = Union[ScalarPoly, FunctionalSubject, MatrixPoly, Realization]


def subject_from_json(data: dict) -> Subject:
    if not isinstance(data, dict):
        raise ValueError("subject must be a JSON object")
    if {"A", "B", "C"} <= data.keys():
        return Realization.from_json(data)
    if "n" in data:
        return MatrixPoly.from_json(data)
    if "coeffs" in data or "factors" in data:
        p = ScalarPoly.from_json(data)
        if "matrix" in data:
            return FunctionalSubject(p, matrix_from_json(data["matrix"]))
        return p
    raise ValueError("unrecognized subject document")


def load_subject(path: Union[str, Path]) -> Subject:
    with open(path) as fh:
        return subject_from_json(json.load(fh))


def subject_to_json(subject: Subject) -> dict:
    return subject.to_json()


def parse_complex(text: str) -> complex:
    """Parse ``"re,im"`` (or a bare real) into a complex number."""
    parts = [t.strip() for t in text.split(",")]
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"cannot parse complex number from {text!r}")
