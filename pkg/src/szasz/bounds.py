"""Szász-type upper bounds and a sampled von Neumann supremum.

Bounds are always evaluated, whether or not their hypothesis holds; the
outcome of the hypothesis check rides along in :attr:`BoundReport.hypothesis`.
Values are carried together with their logarithm, which stays finite when the
exponential overflows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, NamedTuple, Optional, Union

import numpy as np

from .conditions import matrix_location_sum, stable_factors, var_semis_check
from .linalg import (as_matrix, complex_to_json, frobenius_norm, lambda_H, operator_norm,
                     trace_re)
from .poly import MatrixPoly, ScalarPoly, doubly_commutes, eval_scalar
from .realization import Realization, check_structure, validate

CONTRACTION_TOL = 1e-12
VN_SAMPLES = 4096
VN_REFINE_STEPS = 40
INCONSISTENCY_TOL = 1e-9


class BoundId(str, Enum):
    SZASZ1943 = "szasz1943"
    DEBRANGES = "debranges"
    LH = "lh"
    FACTORED = "factored"
    REALIZATION = "realization"
    E1 = "e1"
    E2 = "e2"
    E3 = "e3"
    INTERMEDIATE = "intermediate"
    VN_SUP = "vn_sup"
    COMPLETE = "complete"
    MLAK = "mlak"
    HARTZ = "hartz"


class Hypothesis(str, Enum):
    VERIFIED = "verified"
    VIOLATED = "violated"
    UNCHECKED = "unchecked"

    @classmethod
    def of(cls, ok: Optional[bool]) -> "Hypothesis":
        if ok is None:
            return cls.UNCHECKED
        return cls.VERIFIED if ok else cls.VIOLATED


class InconsistencyError(RuntimeError):
    """A verified hypothesis produced a quantity its theory says is impossible."""


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class BoundReport:
    bound_id: BoundId
    log_value: float
    hypothesis: Hypothesis = Hypothesis.UNCHECKED
    point: object = None
    notes: dict = field(default_factory=dict)

    @property
    def value(self) -> float:
        return _exp(self.log_value)

    def dominates(self, exact: float, slack: float = 1e-9) -> bool:
        """``exact <= value`` up to ``slack`` (absolute below 1, relative above)."""
        if exact <= 0.0:
            return True
        if exact <= self.value + slack * max(1.0, self.value):
            return True
        # compare in log space when the value overflowed
        return math.log(exact) <= self.log_value + slack

    def to_json(self) -> dict:
        out = {"bound_id": self.bound_id.value, "value": self.value,
               "log_value": self.log_value, "hypothesis": self.hypothesis.value,
               "point": _point_json(self.point)}
        if self.notes:
            out["notes"] = self.notes
        return out


def _point_json(point):
    if point is None:
        return None
    if isinstance(point, (complex, float, int, np.number)):
        return complex_to_json(point)
    arr = np.asarray(point)
    if arr.ndim == 2:
        return {"shape": list(arr.shape), "op_norm": operator_norm(arr)}
    return str(point)


def _log_prefactor(n: int, d: int) -> float:
    return 0.5 * d * math.log(n)


def _scalar_hypothesis(p: ScalarPoly) -> Hypothesis:
    if p.factors is None:
        return Hypothesis.UNCHECKED
    return Hypothesis.of(var_semis_check(p.factors).holds)


def szasz_original(p: ScalarPoly, lam) -> BoundReport:
    """``exp(|a_1||lam| + 3(|a_1|^2 + |a_2|)|lam|^2)``; hypothesis is stability."""
    lam = complex(lam)
    r = abs(lam)
    a1, a2 = abs(p.a1), abs(p.a2)
    hyp = Hypothesis.UNCHECKED if p.factors is None else Hypothesis.of(stable_factors(p.factors))
    return BoundReport(BoundId.SZASZ1943, a1 * r + 3 * (a1 * a1 + a2) * r * r, hyp, lam)


def debranges_exponent(a1: complex, a2: complex, lam):
    """``Re(a_1 lam) + (|a_1|^2 - 2 Re a_2)|lam|^2 / 2``; vectorized over ``lam``."""
    lam = np.asarray(lam, dtype=complex)
    q = abs(a1) ** 2 - 2 * a2.real
    return np.real(a1 * lam) + 0.5 * q * np.abs(lam) ** 2


def de_branges(p: ScalarPoly, lam) -> BoundReport:
    lam = complex(lam)
    return BoundReport(BoundId.DEBRANGES, float(debranges_exponent(p.a1, p.a2, lam)),
                       _scalar_hypothesis(p), lam)


def numerical_range_certificate(P: MatrixPoly, samples: int = 256, seed: int = 0) -> Hypothesis:
    """Sampled test of whether the numerical range of ``P`` lies in a half-plane.

    Zeros of ``x* P(lam) x`` over sampled unit vectors ``x`` are genuine points
    of the numerical range, so failing to fit them into a closed half-plane
    through the origin proves the hypothesis false. Passing is evidence only.
    """
    n = P.n
    if P.degree == 0:
        return Hypothesis.VERIFIED
    rng = np.random.default_rng(seed)
    xs = [np.eye(n)[k] for k in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            for w in (1, -1, 1j, -1j):
                x = np.zeros(n, complex)
                x[j], x[k] = 1, w
                xs.append(x / np.sqrt(2))
    for _ in range(samples):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        xs.append(x / np.linalg.norm(x))
    angles = []
    for x in xs:
        # x* P(lam) x = 1 + sum_j (x* A_j x) lam^j, highest power first for np.roots
        c = [np.vdot(x, A @ x) for A in P.coeffs[::-1]] + [1.0]
        c = np.trim_zeros(np.asarray(c, complex), "f")
        if c.size > 1:
            angles.extend(np.angle(np.roots(c)))
    if not angles:
        return Hypothesis.VERIFIED
    a = np.sort(np.mod(angles, 2 * np.pi))
    gaps = np.diff(np.concatenate([a, [a[0] + 2 * np.pi]]))
    return Hypothesis.of(bool(np.max(gaps) >= np.pi - 1e-9))


def lh_bound(P: MatrixPoly, lam, certificate: bool = False) -> BoundReport:
    """``2 exp(lambda_H(lam A_1 - |lam|^2 A_2) + |lam|^2 ||A_1||^2 / 2)`` (operator norm)."""
    lam = complex(lam)
    r2 = abs(lam) ** 2
    X = lam * P.A1 - r2 * P.A2
    log_val = math.log(2.0) + lambda_H(X) + 0.5 * r2 * operator_norm(P.A1) ** 2
    hyp = numerical_range_certificate(P) if certificate else Hypothesis.UNCHECKED
    return BoundReport(BoundId.LH, log_val, hyp, lam)


def _factored_log(n: int, d: int, A1: np.ndarray, A2: np.ndarray, lam: complex) -> float:
    q = frobenius_norm(A1) ** 2 - 2 * trace_re(A2)
    return (_log_prefactor(n, d) + trace_re(lam * A1) / n
            + q * abs(lam) ** 2 / (2 * n))


def matrix_factored_bound(P: MatrixPoly, lam, d: Optional[int] = None) -> BoundReport:
    """``n^{d/2} exp(tr Re(lam A_1)/n + (||A_1||_F^2 - 2 tr Re A_2)|lam|^2/(2n))``.

    ``d`` defaults to the number of stored factors.
    """
    lam = complex(lam)
    if d is None:
        if P.factors is None:
            raise ValueError("factor count d is required when P carries no factors")
        d = P.d
    if P.factors is None:
        hyp = Hypothesis.UNCHECKED
    else:
        hyp = Hypothesis.of(matrix_location_sum(P.factors).holds)
    return BoundReport(BoundId.FACTORED, _factored_log(P.n, d, P.A1, P.A2, lam), hyp, lam)


def realization_bound(R: Realization, lam) -> BoundReport:
    """Factored bound written through ``A_1 = CB`` and ``A_2 = CAB``."""
    validate(R)
    lam = complex(lam)
    CB = R.C @ R.B
    CAB = R.C @ R.A @ R.B
    rep = check_structure(R)
    return BoundReport(BoundId.REALIZATION, _factored_log(R.n, R.d, CB, CAB, lam),
                       Hypothesis.of(rep.elementary_pos_holds), lam)


class FunctionalBounds(NamedTuple):
    e1: BoundReport
    e2: BoundReport
    e3: BoundReport
    exp0: bool


def _q(p: ScalarPoly) -> float:
    return abs(p.a1) ** 2 - 2 * p.a2.real


def functional_bounds(p: ScalarPoly, A) -> FunctionalBounds:
    """The three bounds on ``p(A)``: Frobenius ``E1`` and operator-norm ``E2``, ``E3``.

    ``exp0`` reports whether ``E1``'s exponent is non-positive, in which case
    ``||p(A)||_F <= n^{d/2}``.
    """
    A = as_matrix(A, square=True)
    n = A.shape[0]
    d = p.d
    hyp = _scalar_hypothesis(p)
    q = _q(p)
    if hyp is Hypothesis.VERIFIED and q < -INCONSISTENCY_TOL * (1 + abs(p.a1) ** 2):
        raise InconsistencyError(f"|a_1|^2 - 2 Re a_2 = {q} < 0 under the location condition")
    fro2 = frobenius_norm(A) ** 2
    op = operator_norm(A)
    a1 = p.a1
    log_e1 = _log_prefactor(n, d) + trace_re(a1 * A) / n + q * fro2 / (2 * n)
    log_e2 = op * math.sqrt(d * max(q, 0.0))
    log_e3 = abs(a1) * op + 0.5 * q * op * op
    exp0_expr = abs(a1) ** 2 * fro2 + 2 * (a1 * np.trace(A) - p.a2 * fro2).real
    return FunctionalBounds(
        BoundReport(BoundId.E1, log_e1, hyp, A),
        BoundReport(BoundId.E2, log_e2, hyp, A),
        BoundReport(BoundId.E3, log_e3, hyp, A),
        bool(exp0_expr <= 0.0),
    )


def intermediate_bound(p: ScalarPoly, A) -> BoundReport:
    """``exp(||A|| sum_j |b_j|)``."""
    if p.factors is None:
        raise ValueError("intermediate bound needs the factors b_j")
    A = as_matrix(A, square=True)
    return BoundReport(BoundId.INTERMEDIATE, operator_norm(A) * float(np.sum(np.abs(p.factors))),
                       _scalar_hypothesis(p), A)


Subject = Union[ScalarPoly, MatrixPoly, Callable]


def _circle_modulus(q: Subject, r: float) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(q, ScalarPoly):
        return lambda th: np.abs(eval_scalar(q, r * np.exp(1j * np.atleast_1d(th))))
    if isinstance(q, MatrixPoly):
        def f(th):
            th = np.atleast_1d(np.asarray(th, dtype=float))
            z = r * np.exp(1j * th)
            # batched Horner over the sample axis
            acc = np.zeros((th.size, q.n, q.n), complex)
            for A in q.coeffs[::-1]:
                acc = (acc + A) * z[:, None, None]
            acc = acc + np.eye(q.n)
            return np.linalg.norm(acc, 2, axis=(1, 2))
        return f

    def g(th):
        th = np.atleast_1d(np.asarray(th, dtype=float))
        out = []
        for t in th:
            val = q(r * np.exp(1j * t))
            out.append(abs(val) if np.ndim(val) == 0 else np.linalg.norm(val, 2))
        return np.asarray(out)
    return g


def von_neumann_sup(q: Subject, r: float, samples: int = VN_SAMPLES,
                    refine_steps: int = VN_REFINE_STEPS) -> float:
    """``max_{|z| = r} |q(z)|`` (operator norm for matrix polynomials).

    Uniform sampling of the circle, then golden-section refinement around the
    best sample. By the maximum principle this is the supremum over the disc.
    """
    if r < 0:
        raise ValueError("radius must be non-negative")
    if samples < 16:
        raise ValueError("need at least 16 samples")
    f = _circle_modulus(q, float(r))
    if r == 0:
        return float(f(np.array([0.0]))[0])
    th = 2 * np.pi * np.arange(samples) / samples
    vals = f(th)
    k = int(np.argmax(vals))
    best = float(vals[k])
    h = 2 * np.pi / samples
    lo, hi = th[k] - h, th[k] + h
    invphi = (math.sqrt(5) - 1) / 2
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = float(f(x1)[0]), float(f(x2)[0])
    for _ in range(refine_steps):
        if f1 > f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = float(f(x1)[0])
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = float(f(x2)[0])
    return max(best, f1, f2)


def vn_sup_report(q: Subject, r: float, point=None, **kw) -> BoundReport:
    """:func:`von_neumann_sup` as a report; the inequality needs no hypothesis."""
    val = von_neumann_sup(q, r, **kw)
    log_val = math.log(val) if val > 0 else -math.inf
    return BoundReport(BoundId.VN_SUP, log_val, Hypothesis.VERIFIED, point, {"radius": float(r)})


class LiftedBounds(NamedTuple):
    complete: BoundReport
    mlak: BoundReport
    hartz: BoundReport


def lifted_exponent(P: MatrixPoly, t: float) -> float:
    """``|tr A_1| t / n + (||A_1||_F^2 - 2 tr Re A_2) t^2 / (2n)`` at ``t = ||T||``."""
    n = P.n
    q = frobenius_norm(P.A1) ** 2 - 2 * trace_re(P.A2)
    return abs(np.trace(P.A1)) * t / n + q * t * t / (2 * n)


def lifted_bounds(P: MatrixPoly, T) -> LiftedBounds:
    """Bounds for ``P`` evaluated at a matrix ``T``.

    ``complete`` bounds the Kronecker lift ``I (x) I + sum_j A_j (x) T^j`` for
    any square ``T``; ``mlak`` and ``hartz`` bound ``I + sum_j A_j T^j`` for an
    ``n x n`` contraction ``T`` (``mlak`` additionally needs ``T`` to doubly
    commute with the coefficients). ``hartz`` carries an extra ``sqrt(N+1)``.
    """
    if P.factors is None:
        raise ValueError("lifted bounds need a factored polynomial")
    T = as_matrix(T, square=True)
    t = operator_norm(T)
    loc = matrix_location_sum(P.factors).holds
    expo = _log_prefactor(P.n, P.d) + lifted_exponent(P, t)
    contraction = t <= 1 + CONTRACTION_TOL
    same_size = T.shape[0] == P.n
    commutes = same_size and doubly_commutes(P, T)
    notes = {"op_norm_T": t, "location_sum_holds": loc}
    return LiftedBounds(
        BoundReport(BoundId.COMPLETE, expo, Hypothesis.of(loc), T, dict(notes)),
        BoundReport(BoundId.MLAK, expo, Hypothesis.of(loc and contraction and commutes), T,
                    dict(notes, contraction=contraction, doubly_commutes=commutes)),
        BoundReport(BoundId.HARTZ, expo + 0.5 * math.log(P.degree + 1),
                    Hypothesis.of(loc and contraction and same_size), T,
                    dict(notes, contraction=contraction)),
    )
