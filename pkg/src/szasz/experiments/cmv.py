"""Matrix polynomials showing the ``n^{d/2}`` prefactor of the factored bound cannot be dropped.

With ``J`` the all-ones ``n x n`` matrix, ``A_1 = J`` and ``A_2 = -I``::

    D_k = I + n(k-1)/(2k) J
    P_k(lam) = (I + J lam/k)^k (I + sqrt(D_k) lam/sqrt(k))^k (I - sqrt(D_k) lam/sqrt(k))^k

Every ``P_k`` has first two coefficients ``J`` and ``-I`` and ``3k`` Hermitian
factors, and ``||P_k(iy)||_F`` tends to ``e^{y^2} (e^{n^2 y^2} + n - 1)^{1/2}``.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ..poly import MatrixPoly, expand_matrix_factors


def sqrt_rank_one_update(n: int, c: float) -> np.ndarray:
    """PSD square root of ``I + c J`` (requires ``1 + c n >= 0``)."""
    if 1 + c * n < 0:
        raise ValueError("I + cJ is not positive semi-definite")
    return np.eye(n) + ((math.sqrt(1 + c * n) - 1) / n) * np.ones((n, n))


def _sqrt_D(n: int, k: int) -> np.ndarray:
    return sqrt_rank_one_update(n, n * (k - 1) / (2 * k))


def cmv_factors(n: int, k: int) -> np.ndarray:
    """The ``3k`` factors ``B_j`` of ``P_k`` in evaluation order."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    J = np.ones((n, n))
    S = _sqrt_D(n, k) / math.sqrt(k)
    return np.stack([J / k] * k + [S] * k + [-S] * k).astype(complex)


def cmv_polynomial(n: int, k: int) -> MatrixPoly:
    return expand_matrix_factors(cmv_factors(n, k))


def cmv_matrix(n: int, lam: complex, k: int) -> np.ndarray:
    """``P_k(lam)`` by repeated squaring of the three blocks."""
    I = np.eye(n)
    J = np.ones((n, n))
    S = _sqrt_D(n, k) * (lam / math.sqrt(k))
    mp = np.linalg.matrix_power
    return mp(I + J * (lam / k), k) @ mp(I + S, k) @ mp(I - S, k)


def cmv_sequence(n: int, y: float, k: int) -> float:
    """``||P_k(iy)||_F``."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    return float(np.linalg.norm(cmv_matrix(n, 1j * y, k)))


def cmv_limit(n: int, y: float) -> float:
    """``lim_k ||P_k(iy)||_F = e^{y^2} (e^{n^2 y^2} + n - 1)^{1/2}``."""
    return math.exp(y * y) * math.sqrt(math.exp(n * n * y * y) + n - 1)


def cmv_bound_exponent(n: int, y: float) -> float:
    """Exponent of the factored bound at ``lam = iy`` for ``A_1 = J``, ``A_2 = -I``: ``(n/2 + 1) y^2``."""
    return (n / 2 + 1) * y * y


class CnCheck(NamedTuple):
    ratio: float
    floor: float
    holds: bool


def cn_lower_bound_check(n: int, y: float) -> CnCheck:
    """Lower bound on the constant replacing ``n^{d/2}``.

    ``ratio`` is the limit norm divided by ``e^{(n/2+1) y^2}``; ``floor`` is
    ``e^{y^2 + n y - (n/2+1) y^2}``, equal to ``e^{n/2}`` at ``y = 1``.
    ``ratio >= floor`` exactly when ``e^{n^2 y^2} + n - 1 >= e^{2 n y}``,
    which always holds once ``n y >= 2``.
    """
    if n < 1 or y <= 0:
        raise ValueError("need n >= 1 and y > 0")
    e = cmv_bound_exponent(n, y)
    log_ratio = y * y + 0.5 * math.log(math.exp(n * n * y * y) + n - 1) - e
    log_floor = y * y + n * y - e
    return CnCheck(math.exp(log_ratio), math.exp(log_floor), log_ratio >= log_floor - 1e-12)
