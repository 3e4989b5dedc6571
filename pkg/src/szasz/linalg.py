"""Dense complex matrix kernels and the spectral functionals the bounds need."""
from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-12
MAX_ITER = 100_000


class DimensionError(ValueError):
    """Raised when matrix shapes are incompatible with an operation."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative kernel hits its iteration limit."""


def as_matrix(M, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """Validate ``M`` as a finite 2-D complex array and return it."""
    arr = np.asarray(M, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    if square and arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {arr.shape}")
    return arr


def as_vector(x, *, name: str = "vector") -> np.ndarray:
    arr = np.asarray(x, dtype=complex).reshape(-1)
    if arr.size == 0:
        raise DimensionError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def matrix_parts(M) -> tuple[np.ndarray, np.ndarray]:
    """Return the Hermitian parts ``(Re M, Im M)`` with ``M = Re M + i Im M``.

    ``Re M = (M + M*)/2`` and ``Im M = (M - M*)/(2i)``; both are Hermitian.
    """
    M = as_matrix(M, square=True)
    Mh = M.conj().T
    return (M + Mh) / 2, (M - Mh) / 2j


def herm_part(M) -> np.ndarray:
    return matrix_parts(M)[0]


def skew_part(M) -> np.ndarray:
    return matrix_parts(M)[1]


def frobenius_norm(M) -> float:
    M = as_matrix(M)
    return float(np.sqrt(np.sum(M.real**2 + M.imag**2)))


def _power_hermitian_psd(H: np.ndarray, tol: float, max_iter: int, seed: int = 0) -> float:
    # Largest eigenvalue of a Hermitian PSD matrix by power iteration.
    n = H.shape[0]
    x = np.ones(n, dtype=complex) / np.sqrt(n)
    restarted = False
    prev = None
    stall = 0
    for _ in range(max_iter):
        y = H @ x
        ny = np.linalg.norm(y)
        if ny == 0.0:
            if restarted:
                return 0.0
            # start vector in the kernel; one random restart
            rng = np.random.default_rng(seed)
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            x /= np.linalg.norm(x)
            restarted = True
            continue
        x = y / ny
        rq = float(np.real(np.vdot(x, H @ x)))
        if prev is not None:
            if abs(rq - prev) <= tol * max(abs(rq), np.finfo(float).tiny):
                stall += 1
                if stall >= 3:
                    return rq
            else:
                stall = 0
        prev = rq
    raise ConvergenceError(f"power iteration did not converge in {max_iter} iterations")


def operator_norm(M, tol: float = DEFAULT_TOL, *, method: str = "svd",
                  max_iter: int = MAX_ITER) -> float:
    """Largest singular value of ``M``.

    ``method="svd"`` uses LAPACK; ``method="power"`` runs power iteration on
    ``M* M`` (deterministic all-ones start, one random restart when the start
    vector lies in the kernel) and raises :class:`ConvergenceError` after
    ``max_iter`` steps.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = as_matrix(M)
    if method == "svd":
        return float(np.linalg.norm(M, 2))
    if method == "power":
        G = M.conj().T @ M
        return float(np.sqrt(max(_power_hermitian_psd(G, tol, max_iter), 0.0)))
    raise ValueError(f"unknown method {method!r}")


def hadamard(X, Y) -> np.ndarray:
    X = as_matrix(X, name="X")
    Y = as_matrix(Y, name="Y")
    if X.shape != Y.shape:
        raise DimensionError(f"shape mismatch {X.shape} vs {Y.shape}")
    return X * Y


def max_eig_hermitian(H, tol: float = DEFAULT_TOL, *, method: str = "eigh",
                      max_iter: int = MAX_ITER) -> float:
    """Largest eigenvalue of a Hermitian matrix.

    The power route shifts by ``||H||_F I`` so the iterated matrix is PSD,
    then removes the shift.
    """
    H = as_matrix(H, square=True)
    H = (H + H.conj().T) / 2
    if method == "eigh":
        return float(np.linalg.eigvalsh(H)[-1])
    if method == "power":
        shift = frobenius_norm(H)
        if shift == 0.0:
            return 0.0
        n = H.shape[0]
        top = _power_hermitian_psd(H + shift * np.eye(n), tol, max_iter)
        return top - shift
    raise ValueError(f"unknown method {method!r}")


def min_eig_hermitian(H, tol: float = DEFAULT_TOL, *, method: str = "eigh") -> float:
    return -max_eig_hermitian(-as_matrix(H, square=True), tol, method=method)


def lambda_H(X, tol: float = DEFAULT_TOL, *, method: str = "eigh") -> float:
    """Largest eigenvalue of ``Re X = (X + X*)/2``."""
    return max_eig_hermitian(herm_part(X), tol, method=method)


def kronecker(X, Y) -> np.ndarray:
    return np.kron(as_matrix(X, name="X"), as_matrix(Y, name="Y"))


def trace_re(M) -> float:
    """``tr Re M``, which equals ``Re tr M``."""
    return float(np.real(np.trace(as_matrix(M, square=True))))


def matrix_to_json(M) -> list:
    """Serialize as nested row-major lists of ``[re, im]`` pairs."""
    M = as_matrix(M)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def matrix_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise DimensionError("expected nested rows of [re, im] pairs")
    return as_matrix(arr[..., 0] + 1j * arr[..., 1])


def complex_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(data) -> complex:
    if isinstance(data, (int, float)):
        return complex(data)
    re, im = data
    return complex(float(re), float(im))
