"""Scalar and matrix polynomials normalized to ``p(0) = 1`` / ``P(0) = I``.

Coefficient arrays never store the constant term. ``ScalarPoly.coeffs[j-1]``
is the coefficient of ``lam**j``; ``MatrixPoly.coeffs[j-1]`` is ``A_j``.
Optional degree-one factors are kept in evaluation order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .linalg import (DimensionError, as_matrix, complex_from_json, complex_to_json,
                     frobenius_norm, matrix_from_json, matrix_to_json)

FACTOR_TOL = 1e-12
COMMUTE_TOL = 1e-10


class HypothesisError(ValueError):
    """An operation's mathematical precondition does not hold."""


def _elementary_symmetric(b: np.ndarray) -> np.ndarray:
    # coefficients of prod (1 + b_j x), constant term dropped
    c = np.zeros(len(b) + 1, dtype=complex)
    c[0] = 1.0
    for k, bk in enumerate(b, start=1):
        c[1:k + 1] = c[1:k + 1] + bk * c[0:k]
    return c[1:]


@dataclass(frozen=True, eq=False)
class ScalarPoly:
    """``p(lam) = 1 + sum_j a_j lam**j``, optionally ``prod_j (1 + b_j lam)``."""

    coeffs: np.ndarray
    factors: Optional[np.ndarray] = None

    def __post_init__(self):
        a = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if a.size == 0:
            raise ValueError("degree must be at least 1")
        if not np.all(np.isfinite(a)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", a)
        if self.factors is not None:
            b = np.asarray(self.factors, dtype=complex).reshape(-1)
            if b.size == 0 or not np.all(np.isfinite(b)):
                raise ValueError("factors must be a non-empty finite list")
            expanded = _elementary_symmetric(b)
            m = max(a.size, b.size)
            lhs = np.zeros(m, complex)
            rhs = np.zeros(m, complex)
            lhs[:a.size] = a
            rhs[:b.size] = expanded
            scale = 1.0 + np.max(np.abs(rhs))
            if np.max(np.abs(lhs - rhs)) > FACTOR_TOL * scale:
                raise ValueError("factors do not expand to the given coefficients")
            object.__setattr__(self, "factors", b)

    @classmethod
    def from_factors(cls, b: Sequence[complex]) -> "ScalarPoly":
        return expand_scalar_factors(b)

    @classmethod
    def from_full_coeffs(cls, c: Sequence[complex]) -> "ScalarPoly":
        """Build from ``[1, a_1, ..., a_d]`` (ascending); rejects ``c[0] != 1``."""
        c = np.asarray(c, dtype=complex).reshape(-1)
        if c.size < 2:
            raise ValueError("need at least a linear term")
        if c[0] != 1:
            raise ValueError(f"constant term must be 1, got {c[0]}")
        return cls(c[1:])

    @property
    def degree(self) -> int:
        return self.coeffs.size

    @property
    def d(self) -> int:
        """Factor count when factored, else the stored degree."""
        return self.factors.size if self.factors is not None else self.coeffs.size

    @property
    def a1(self) -> complex:
        return complex(self.coeffs[0])

    @property
    def a2(self) -> complex:
        return complex(self.coeffs[1]) if self.coeffs.size > 1 else 0j

    def __call__(self, lam):
        return eval_scalar(self, lam)

    def at_matrix(self, A) -> np.ndarray:
        return eval_scalar_at_matrix(self, A)

    def to_json(self) -> dict:
        out = {"coeffs": [complex_to_json(z) for z in self.coeffs]}
        if self.factors is not None:
            out["factors"] = [complex_to_json(z) for z in self.factors]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ScalarPoly":
        factors = data.get("factors")
        if factors is not None:
            b = [complex_from_json(z) for z in factors]
            if "coeffs" not in data:
                return expand_scalar_factors(b)
            return cls([complex_from_json(z) for z in data["coeffs"]], b)
        return cls([complex_from_json(z) for z in data["coeffs"]])


@dataclass(frozen=True, eq=False)
class MatrixPoly:
    """``P(lam) = I + sum_{j=1}^N lam**j A_j``, optionally ``prod_j (I + lam B_j)``.

    ``coeffs`` has shape ``(N, n, n)``; ``N = 0`` is the constant ``I``.
    """

    n: int
    coeffs: np.ndarray
    factors: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise ValueError("n must be positive")
        A = np.asarray(self.coeffs, dtype=complex)
        if A.size == 0:
            A = np.zeros((0, n, n), complex)
        if A.ndim != 3 or A.shape[1:] != (n, n):
            raise DimensionError(f"coefficients must be {n}x{n}, got array of shape {A.shape}")
        if not np.all(np.isfinite(A)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", A)
        if self.factors is not None:
            B = np.asarray(self.factors, dtype=complex)
            if B.ndim != 3 or B.shape[0] == 0 or B.shape[1:] != (n, n):
                raise DimensionError("factors must be a non-empty stack of n x n matrices")
            expanded = _expand_matrix(B)
            m = max(A.shape[0], expanded.shape[0])
            lhs = np.zeros((m, n, n), complex)
            rhs = np.zeros((m, n, n), complex)
            lhs[:A.shape[0]] = A
            rhs[:expanded.shape[0]] = expanded
            scale = 1.0 + (np.max(np.abs(rhs)) if m else 0.0)
            if m and np.max(np.abs(lhs - rhs)) > FACTOR_TOL * scale:
                raise ValueError("factors do not expand to the given coefficients")
            object.__setattr__(self, "factors", B)

    @classmethod
    def from_factors(cls, B) -> "MatrixPoly":
        return expand_matrix_factors(B)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0]

    @property
    def d(self) -> Optional[int]:
        return None if self.factors is None else self.factors.shape[0]

    def coeff(self, j: int) -> np.ndarray:
        """``A_j`` for ``j >= 1``, zero beyond the degree."""
        if j < 1:
            raise ValueError("j must be >= 1")
        if j <= self.degree:
            return self.coeffs[j - 1]
        return np.zeros((self.n, self.n), complex)

    @property
    def A1(self) -> np.ndarray:
        return self.coeff(1)

    @property
    def A2(self) -> np.ndarray:
        return self.coeff(2)

    def __call__(self, lam):
        return eval_matrix_poly(self, lam)

    def to_json(self) -> dict:
        out = {"n": self.n, "coeffs": [matrix_to_json(A) for A in self.coeffs]}
        if self.factors is not None:
            out["factors"] = [matrix_to_json(B) for B in self.factors]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "MatrixPoly":
        n = int(data["n"])
        factors = data.get("factors")
        if factors is not None:
            B = np.stack([matrix_from_json(m) for m in factors])
            if "coeffs" not in data:
                return expand_matrix_factors(B)
        else:
            B = None
        coeffs = [matrix_from_json(m) for m in data.get("coeffs", [])]
        A = np.stack(coeffs) if coeffs else np.zeros((0, n, n), complex)
        return cls(n, A, B)


def expand_scalar_factors(b: Sequence[complex]) -> ScalarPoly:
    """Coefficients of ``prod_j (1 + b_j lam)`` (elementary symmetric functions of ``b``)."""
    b = np.asarray(b, dtype=complex).reshape(-1)
    if b.size == 0:
        raise ValueError("need at least one factor")
    return ScalarPoly(_elementary_symmetric(b), b)


def _expand_matrix(B: np.ndarray) -> np.ndarray:
    d, n, _ = B.shape
    # C[m] is the lam**m coefficient of the running product, C[0] = I
    C = np.zeros((d + 1, n, n), complex)
    C[0] = np.eye(n)
    for k in range(d):
        # right-multiply by (I + lam B_k)
        C[1:k + 2] = C[1:k + 2] + C[0:k + 1] @ B[k]
    A = C[1:]
    N = A.shape[0]
    while N > 0 and not np.any(A[N - 1]):
        N -= 1
    return A[:N]


def expand_matrix_factors(B) -> MatrixPoly:
    """Expand the ordered product ``(I + lam B_1)(I + lam B_2)...(I + lam B_d)``.

    Trailing zero coefficients are trimmed, so ``A_N != 0`` (or ``N = 0``).
    """
    if isinstance(B, np.ndarray) and B.ndim == 3:
        stack = B.astype(complex)
    else:
        mats = [as_matrix(Bj, square=True, name="factor") for Bj in B]
        if not mats:
            raise ValueError("need at least one factor")
        n = mats[0].shape[0]
        if any(m.shape != (n, n) for m in mats):
            raise DimensionError("all factors must have the same size")
        stack = np.stack(mats)
    if stack.shape[0] == 0:
        raise ValueError("need at least one factor")
    if stack.shape[1] != stack.shape[2]:
        raise DimensionError("factors must be square")
    return MatrixPoly(stack.shape[1], _expand_matrix(stack), stack)


def eval_scalar(p: ScalarPoly, lam):
    """Horner evaluation; accepts scalar or array ``lam``."""
    lam = np.asarray(lam, dtype=complex)
    acc = np.zeros_like(lam)
    for a in p.coeffs[::-1]:
        acc = (acc + a) * lam
    acc = acc + 1.0
    return complex(acc) if acc.ndim == 0 else acc


def eval_scalar_factored(p: ScalarPoly, lam):
    if p.factors is None:
        raise ValueError("polynomial carries no factors")
    lam = np.asarray(lam, dtype=complex)
    out = np.ones_like(lam)
    for b in p.factors:
        out = out * (1.0 + b * lam)
    return complex(out) if out.ndim == 0 else out


def eval_matrix_poly(P: MatrixPoly, lam) -> np.ndarray:
    lam = complex(lam)
    acc = np.zeros((P.n, P.n), complex)
    for A in P.coeffs[::-1]:
        acc = (acc + A) * lam
    return acc + np.eye(P.n)


def eval_matrix_factored(P: MatrixPoly, lam) -> np.ndarray:
    if P.factors is None:
        raise ValueError("polynomial carries no factors")
    lam = complex(lam)
    out = np.eye(P.n, dtype=complex)
    for B in P.factors:
        out = out @ (np.eye(P.n) + lam * B)
    return out


def eval_scalar_at_matrix(p: ScalarPoly, A) -> np.ndarray:
    """``p(A) = I + sum_j a_j A**j`` by Horner."""
    A = as_matrix(A, square=True)
    n = A.shape[0]
    acc = np.zeros((n, n), complex)
    for a in p.coeffs[::-1]:
        acc = (acc + a * np.eye(n)) @ A
    return acc + np.eye(n)


def commutation_residuals(P: MatrixPoly, T) -> list[tuple[int, float, float]]:
    """``(j, ||T A_j - A_j T||_F, ||T A_j* - A_j* T||_F)`` for every coefficient."""
    T = as_matrix(T, square=True)
    out = []
    for j, A in enumerate(P.coeffs, start=1):
        Ah = A.conj().T
        out.append((j, frobenius_norm(T @ A - A @ T), frobenius_norm(T @ Ah - Ah @ T)))
    return out


def doubly_commutes(P: MatrixPoly, T, tol: float = COMMUTE_TOL) -> bool:
    T = as_matrix(T, square=True)
    if T.shape[0] != P.n:
        return False
    nT = frobenius_norm(T)
    for j, r1, r2 in commutation_residuals(P, T):
        scale = max(1.0, nT * frobenius_norm(P.coeffs[j - 1]))
        if max(r1, r2) > tol * scale:
            return False
    return True


def eval_matrix_poly_at_matrix(P: MatrixPoly, T, mode: str = "kronecker") -> np.ndarray:
    """Evaluate ``P`` at a matrix argument.

    ``mode="doubly-commuting"`` returns ``I + sum_j A_j T**j`` (``T`` is
    ``n x n`` and must doubly commute with every ``A_j``).
    ``mode="kronecker"`` returns ``I_n (x) I_m + sum_j A_j (x) T**j`` for any
    square ``T`` of size ``m``.
    """
    T = as_matrix(T, square=True)
    m = T.shape[0]
    if mode == "kronecker":
        out = np.eye(P.n * m, dtype=complex)
        Tj = np.eye(m, dtype=complex)
        for A in P.coeffs:
            Tj = Tj @ T
            out = out + np.kron(A, Tj)
        return out
    if mode in ("doubly-commuting", "doubly_commuting"):
        if m != P.n:
            raise DimensionError(f"T must be {P.n}x{P.n} in doubly-commuting mode")
        nT = frobenius_norm(T)
        for j, r1, r2 in commutation_residuals(P, T):
            scale = max(1.0, nT * frobenius_norm(P.coeffs[j - 1]))
            if max(r1, r2) > COMMUTE_TOL * scale:
                raise HypothesisError(
                    f"T does not doubly commute with A_{j}: residual {max(r1, r2):.3e}")
        return eval_matrix_poly_left(P, T)
    raise ValueError(f"unknown mode {mode!r}")


def eval_matrix_poly_left(P: MatrixPoly, T) -> np.ndarray:
    """``I + sum_j A_j T**j`` with no commutation requirement on ``T``."""
    T = as_matrix(T, square=True)
    if T.shape[0] != P.n:
        raise DimensionError(f"T must be {P.n}x{P.n}")
    n = P.n
    out = np.eye(n, dtype=complex)
    Tj = np.eye(n, dtype=complex)
    for A in P.coeffs:
        Tj = Tj @ T
        out = out + A @ Tj
    return out
