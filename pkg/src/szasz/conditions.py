"""Zero-location and factor-location hypotheses behind the Szász-type bounds.

Every check returns a :class:`ConditionVerdict` carrying the signed quantity
whose non-negativity is the hypothesis, so callers can see how close to the
boundary an instance sits.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .linalg import (DimensionError, as_matrix, as_vector, frobenius_norm, hadamard,
                     max_eig_hermitian, skew_part)

SLACK = 1e-10
PSD_TOL = 1e-10


@dataclass(frozen=True)
class ConditionVerdict:
    value: float
    holds: bool
    slack: float

    def __bool__(self) -> bool:
        return self.holds


def _verdict(value: float, slack: float) -> ConditionVerdict:
    return ConditionVerdict(float(value), bool(value >= -slack), slack)


def _pair_sum(x: np.ndarray) -> float:
    # sum_{j<k} x_j x_k without the O(d^2) loop
    s = float(np.sum(x))
    return 0.5 * (s * s - float(np.sum(x * x)))


def scalar_location_sum(b: Sequence[complex], slack: float = SLACK) -> ConditionVerdict:
    """``sum_{j<k} Im b_j Im b_k``; zero for a single factor."""
    im = np.imag(np.asarray(b, dtype=complex).reshape(-1))
    if im.size == 0:
        raise ValueError("need at least one factor")
    return _verdict(_pair_sum(im), slack)


def var_semis_check(b: Sequence[complex], slack: float = SLACK) -> ConditionVerdict:
    """``(d-1) mean(Im b)^2 - var(Im b)`` with the population variance.

    This is ``2/d`` times :func:`scalar_location_sum`, so the two agree in sign.
    """
    im = np.imag(np.asarray(b, dtype=complex).reshape(-1))
    d = im.size
    if d == 0:
        raise ValueError("need at least one factor")
    mean = float(np.mean(im))
    var = float(np.var(im))
    return _verdict((d - 1) * mean * mean - var, slack)


def _stack(B) -> np.ndarray:
    mats = [as_matrix(Bj, square=True, name="factor") for Bj in B]
    if not mats:
        raise ValueError("need at least one matrix")
    n = mats[0].shape[0]
    if any(m.shape != (n, n) for m in mats):
        raise DimensionError("all matrices must have the same size")
    return np.stack(mats)


def _skew_parts(B: np.ndarray) -> np.ndarray:
    return (B - np.conj(np.swapaxes(B, 1, 2))) / 2j


def matrix_location_sum(B, slack: float = SLACK) -> ConditionVerdict:
    """``sum_{j<k} tr(Im B_j Im B_k)``; the negligible imaginary residue is dropped."""
    Im = _skew_parts(_stack(B))
    total = 0.0
    for j, k in combinations(range(Im.shape[0]), 2):
        # tr(XY) for Hermitian X, Y is sum(X * Y^T) and real
        total += float(np.real(np.sum(Im[j] * Im[k].T)))
    return _verdict(total, slack)


def im_identity_check(B) -> tuple[float, float]:
    """Both sides of ``2 sum_{j<k} tr(Im B_j Im B_k) = ||sum Im B_j||_F^2 - sum ||Im B_j||_F^2``.

    The left side is a direct pairwise trace sum, the right side uses norms only.
    """
    Im = _skew_parts(_stack(B))
    lhs = 0.0
    for j, k in combinations(range(Im.shape[0]), 2):
        lhs += float(np.real(np.trace(Im[j] @ Im[k])))
    lhs *= 2.0
    rhs = frobenius_norm(Im.sum(axis=0)) ** 2 - sum(frobenius_norm(X) ** 2 for X in Im)
    return lhs, float(rhs)


def elementary_pos_value(B, C) -> float:
    B = as_matrix(B, name="B")
    C = as_matrix(C, name="C")
    d, n = B.shape
    if C.shape != (n, d):
        raise DimensionError(f"C must be {n}x{d} for B of shape {B.shape}, got {C.shape}")
    BC = B @ C
    CB = C @ B
    lhs = frobenius_norm(CB) ** 2 + np.real(np.trace(hadamard(BC, BC)))
    rhs = np.real(np.trace(hadamard(C.conj().T @ C, B @ B.conj().T))) \
        + np.real(np.trace(BC @ BC))
    return float(lhs - rhs)


def elementary_pos_check(B, C, slack: float = SLACK) -> ConditionVerdict:
    """Realization form of the factor-location hypothesis.

    ``B`` is ``d x n`` with rows ``v_j*``, ``C`` is ``n x d`` with columns
    ``u_j``. The returned value (left minus right side) equals
    ``4 sum_{j<k} tr(Im B_j Im B_k)`` for ``B_j = u_j v_j*``.
    """
    return _verdict(elementary_pos_value(B, C), slack)


def minus_semis_predicate(B, tol: float = PSD_TOL) -> bool:
    """True iff every ``Im B_j`` is negative semi-definite (up to ``tol``)."""
    for Bj in _stack(B):
        if max_eig_hermitian(skew_part(Bj)) > tol:
            return False
    return True


def rank_one_trace(u_j, v_j, u_k, v_k) -> float:
    """``Re((u_j* u_k)(v_k* v_j) - (v_j* u_k)(v_k* u_j))``.

    Equals ``2 tr(Im(u_j v_j*) Im(u_k v_k*))``.
    """
    vecs = [as_vector(x) for x in (u_j, v_j, u_k, v_k)]
    if len({x.size for x in vecs}) != 1:
        raise DimensionError("vectors must have equal length")
    uj, vj, uk, vk = vecs
    val = np.vdot(uj, uk) * np.vdot(vk, vj) - np.vdot(vj, uk) * np.vdot(vk, uj)
    return float(np.real(val))


def stable_factors(b: Sequence[complex], tol: float = 0.0) -> bool:
    """All zeros ``-1/b_j`` outside the open upper half-plane, i.e. ``Im b_j <= 0``."""
    return bool(np.all(np.imag(np.asarray(b, dtype=complex)) <= tol))
