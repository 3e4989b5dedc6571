"""System realizations ``P(lam) = I + lam C (I - lam A)^{-1} B`` of rank-one factorizations.

For factors ``B_j = u_j v_j*`` (applied in order ``j = 1..d``) the realization
has ``B`` with rows ``v_j*``, ``C`` with columns ``u_j`` and a strictly
upper-triangular ``A`` whose ``(j, k)`` entry is ``v_j* u_k`` for ``j < k``.
That choice is forced by ``A - BC`` being lower-triangular.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .conditions import elementary_pos_check
from .linalg import (DimensionError, as_matrix, as_vector, frobenius_norm, matrix_from_json,
                     matrix_to_json)
from .poly import MatrixPoly

STRUCT_TOL = 1e-10
NONNEG_TOL = 1e-12


class StructureError(ValueError):
    """A realization violates the triangular structure it is required to have."""


@dataclass(frozen=True, eq=False)
class Realization:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A, square=True, name="A")
        B = as_matrix(self.B, name="B")
        C = as_matrix(self.C, name="C")
        d = A.shape[0]
        if B.shape[0] != d or C.shape != (B.shape[1], d):
            raise DimensionError(
                f"need A d x d, B d x n, C n x d; got {A.shape}, {B.shape}, {C.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    @property
    def n(self) -> int:
        return self.B.shape[1]

    @property
    def d(self) -> int:
        return self.A.shape[0]

    @property
    def u(self) -> list[np.ndarray]:
        return [self.C[:, j].copy() for j in range(self.d)]

    @property
    def v(self) -> list[np.ndarray]:
        return [self.B[j].conj() for j in range(self.d)]

    def rank_one_factors(self) -> np.ndarray:
        """``B_j = u_j v_j*`` stacked as ``(d, n, n)``."""
        return np.einsum("ij,jk->jik", self.C, self.B)

    def coefficient(self, m: int) -> np.ndarray:
        """``A_m = C A^{m-1} B``."""
        if m < 1:
            raise ValueError("m must be >= 1")
        return self.C @ np.linalg.matrix_power(self.A, m - 1) @ self.B

    def to_matrix_poly(self) -> MatrixPoly:
        coeffs = [self.coefficient(m) for m in range(1, self.d + 1)]
        N = len(coeffs)
        while N > 0 and not np.any(coeffs[N - 1]):
            N -= 1
        A = np.stack(coeffs[:N]) if N else np.zeros((0, self.n, self.n), complex)
        return MatrixPoly(self.n, A, self.rank_one_factors())

    def __call__(self, lam) -> np.ndarray:
        return eval_realization(self, lam)

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "A": matrix_to_json(self.A),
                "B": matrix_to_json(self.B), "C": matrix_to_json(self.C)}

    @classmethod
    def from_json(cls, data: dict) -> "Realization":
        R = cls(matrix_from_json(data["A"]), matrix_from_json(data["B"]),
                matrix_from_json(data["C"]))
        if ("n" in data and int(data["n"]) != R.n) or ("d" in data and int(data["d"]) != R.d):
            raise DimensionError("declared n/d disagree with the matrices")
        return R


def build_realization(u: Sequence, v: Sequence) -> Realization:
    """Realization of ``prod_j (I + lam u_j v_j*)``."""
    us = [as_vector(x, name="u_j") for x in u]
    vs = [as_vector(x, name="v_j") for x in v]
    if not us or len(us) != len(vs):
        raise DimensionError("u and v must be non-empty lists of equal length")
    n = us[0].size
    if any(x.size != n for x in us + vs):
        raise DimensionError("all vectors must have the same length")
    C = np.stack(us, axis=1)
    B = np.stack([x.conj() for x in vs])
    A = np.triu(B @ C, k=1)
    return Realization(A, B, C)


def realization_from_factors(B_factors) -> Realization:
    """Split each rank-one (or zero) factor as ``u v*`` and build the realization."""
    us, vs = [], []
    for Bj in B_factors:
        Bj = as_matrix(Bj, square=True, name="factor")
        U, s, Vh = np.linalg.svd(Bj)
        if s.size > 1 and s[1] > STRUCT_TOL * max(1.0, s[0]):
            raise StructureError(f"factor has rank > 1 (second singular value {s[1]:.3e})")
        us.append(U[:, 0] * s[0])
        vs.append(Vh[0].conj())
    return build_realization(us, vs)


@dataclass(frozen=True)
class StructureReport:
    strict_upper_residual: float
    lower_residual: float
    entry_residual: float
    nilpotency_residual: float
    delta_distance: float
    nonneg: bool
    elementary_pos_value: float
    elementary_pos_holds: bool

    @property
    def valid(self) -> bool:
        return max(self.strict_upper_residual, self.lower_residual,
                   self.entry_residual) <= STRUCT_TOL

    @property
    def nonneg_guarantee_broken(self) -> bool:
        # nonnegative B and iC guarantee the hypothesis
        return self.valid and self.nonneg and not self.elementary_pos_holds


def check_structure(R: Realization) -> StructureReport:
    A, B, C = R.A, R.B, R.C
    scale = max(1.0, frobenius_norm(B) * frobenius_norm(C))
    strict_upper = frobenius_norm(np.tril(A)) / scale
    lower = frobenius_norm(np.triu(A - B @ C, k=1)) / scale
    entry = frobenius_norm(A - np.triu(B @ C, k=1)) / scale
    Ad = np.linalg.matrix_power(A, R.d)
    nil = frobenius_norm(Ad) / max(1.0, frobenius_norm(A)) ** R.d
    delta = frobenius_norm(C - 1j * B.conj().T)
    iC = 1j * C
    nonneg = bool(np.all(np.abs(B.imag) <= NONNEG_TOL) and np.all(B.real >= -NONNEG_TOL)
                  and np.all(np.abs(iC.imag) <= NONNEG_TOL) and np.all(iC.real >= -NONNEG_TOL))
    verdict = elementary_pos_check(B, C)
    return StructureReport(strict_upper, lower, entry, nil, delta, nonneg,
                           verdict.value, verdict.holds)


def validate(R: Realization, tol: float = STRUCT_TOL) -> None:
    rep = check_structure(R)
    worst = max(rep.strict_upper_residual, rep.lower_residual, rep.entry_residual)
    if worst > tol:
        raise StructureError(
            f"realization is not of triangular rank-one form (residual {worst:.3e})")


def factors_from_realization(R: Realization) -> list[tuple[np.ndarray, np.ndarray]]:
    """Read ``(u_j, v_j)`` from the columns of ``C`` and rows of ``B``; rejects bad structure."""
    validate(R)
    return list(zip(R.u, R.v))


def eval_realization(R: Realization, lam) -> np.ndarray:
    """``I + lam C (I - lam A)^{-1} B`` via the finite Neumann series of nilpotent ``A``."""
    validate(R)
    lam = complex(lam)
    d = R.d
    term = np.eye(d, dtype=complex)
    resolvent = np.eye(d, dtype=complex)
    for _ in range(d - 1):
        term = term @ (lam * R.A)
        resolvent = resolvent + term
    return np.eye(R.n) + lam * (R.C @ resolvent @ R.B)
