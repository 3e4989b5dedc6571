"""Randomized soundness checks of the bounds on admissible instances.

Each trial gets its own generator spawned from the run seed, draws an
instance satisfying the relevant location hypothesis, and compares exact
norms against every applicable bound on a 25-point grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..bounds import (Hypothesis, de_branges, debranges_exponent, functional_bounds,
                      intermediate_bound, lifted_bounds, matrix_factored_bound, realization_bound,
                      szasz_original, von_neumann_sup)
from ..conditions import matrix_location_sum, var_semis_check
from ..poly import (eval_matrix_poly_at_matrix, eval_matrix_poly_left, expand_matrix_factors,
                    expand_scalar_factors)
from ..realization import realization_from_factors

MODES = ("scalar", "matrix", "functional", "lifted")
SLACK = 1e-9
GRID_POINTS = 25


@dataclass(frozen=True)
class Violation:
    trial: int
    bound_id: str
    point: object
    exact: float
    bound: float

    def to_json(self) -> dict:
        point = self.point
        if isinstance(point, complex):
            point = [point.real, point.imag]
        return {"trial": self.trial, "bound_id": self.bound_id, "point": point,
                "exact": self.exact, "bound": self.bound}


@dataclass
class FuzzReport:
    mode: str
    trials: int
    seed: int
    checks: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"mode": self.mode, "trials": self.trials, "seed": self.seed,
                "checks": self.checks, "violations": [v.to_json() for v in self.violations]}


def exceeds(exact, bound, slack: float = SLACK):
    """``exact > bound`` beyond ``slack`` (absolute below 1, relative above)."""
    exact = np.asarray(exact, dtype=float)
    bound = np.asarray(bound, dtype=float)
    return exact > bound + slack * np.maximum(1.0, bound)


def _disc(rng: np.random.Generator, radius: float, size: int = GRID_POINTS) -> np.ndarray:
    r = radius * np.sqrt(rng.uniform(size=size))
    return r * np.exp(2j * np.pi * rng.uniform(size=size))


def random_admissible_factors(rng: np.random.Generator, d: int) -> np.ndarray:
    """Factors ``b_j`` whose imaginary parts satisfy the location condition.

    Mixes half-plane-stable draws, rejection-sampled mixed-sign draws, and
    boundary cases with ``k`` imaginary parts ``1`` and ``k`` equal to
    ``-(k + sqrt(2k - 1))/(k - 1)``, where the pairwise sum is exactly zero.
    """
    scale = rng.uniform(0.1, 2.0)
    kind = rng.integers(3)
    re = rng.standard_normal(d)
    if kind == 2 and d >= 4 and d % 2 == 0:
        k = d // 2
        im = np.array([1.0] * k + [-(k + math.sqrt(2 * k - 1)) / (k - 1)] * k)
        im = im / np.max(np.abs(im))
        b = scale * (re + 1j * im * rng.choice([-1.0, 1.0]))
        return rng.permutation(b)
    if kind == 1 and d >= 2:
        for _ in range(50):
            im = rng.standard_normal(d) + rng.uniform(-1.5, 1.5)
            if var_semis_check(im * 1j).holds:
                return scale * (re + 1j * im)
    im = -np.abs(rng.standard_normal(d))
    return scale * (re + 1j * im)


def _random_herm(rng, n):
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (X + X.conj().T) / 2


def random_admissible_matrix_factors(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """Factors with ``Im B_j <= 0``: ``H - iK`` with ``K`` PSD, or rank-one ``c v v*`` with ``Im c <= 0``."""
    scale = rng.uniform(0.1, 1.0)
    out = []
    for _ in range(d):
        if rng.uniform() < 0.5:
            G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            out.append(scale * (_random_herm(rng, n) - 1j * (G @ G.conj().T) / n))
        else:
            # rank-one u v* with Im <= 0: u = c v, Im c <= 0
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            c = rng.standard_normal() - 1j * abs(rng.standard_normal())
            out.append(scale * c * np.outer(v, v.conj()) / n)
    return np.stack(out)


def _fuzz_scalar(rng, trial, report):
    d = int(rng.integers(1, 9))
    b = random_admissible_factors(rng, d)
    p = expand_scalar_factors(b)
    lam = _disc(rng, 4.0)
    exact = np.abs(np.prod(1.0 + np.outer(lam, b), axis=1))
    with np.errstate(over="ignore"):
        _scalar_checks(p, lam, exact, trial, report)


def _scalar_checks(p, lam, exact, trial, report):
    if de_branges(p, 0).hypothesis is Hypothesis.VERIFIED:
        bound = np.exp(debranges_exponent(p.a1, p.a2, lam))
        report.checks += lam.size
        for i in np.flatnonzero(exceeds(exact, bound)):
            report.violations.append(Violation(trial, "debranges", complex(lam[i]),
                                               float(exact[i]), float(bound[i])))
    if szasz_original(p, 0).hypothesis is Hypothesis.VERIFIED:
        r = np.abs(lam)
        a1, a2 = abs(p.a1), abs(p.a2)
        bound = np.exp(a1 * r + 3 * (a1 * a1 + a2) * r * r)
        report.checks += lam.size
        for i in np.flatnonzero(exceeds(exact, bound)):
            report.violations.append(Violation(trial, "szasz1943", complex(lam[i]),
                                               float(exact[i]), float(bound[i])))


def _fuzz_matrix(rng, trial, report):
    n = int(rng.integers(1, 5))
    d = int(rng.integers(1, 6))
    B = random_admissible_matrix_factors(rng, n, d)
    P = expand_matrix_factors(B)
    if not matrix_location_sum(B).holds:
        return
    R = None
    if all(np.linalg.matrix_rank(Bj, tol=1e-10) <= 1 for Bj in B):
        R = realization_from_factors(B)
    for lam in _disc(rng, 3.0):
        lam = complex(lam)
        M = np.eye(n, dtype=complex)
        for Bj in B:
            M = M @ (np.eye(n) + lam * Bj)
        exact = float(np.linalg.norm(M))
        rep = matrix_factored_bound(P, lam)
        report.checks += 1
        if not rep.dominates(exact, SLACK):
            report.violations.append(Violation(trial, "factored", lam, exact, rep.value))
        if R is not None:
            rrep = realization_bound(R, lam)
            report.checks += 1
            if rrep.hypothesis is Hypothesis.VERIFIED and not rrep.dominates(exact, SLACK):
                report.violations.append(Violation(trial, "realization", lam, exact, rrep.value))


def _fuzz_functional(rng, trial, report):
    d = int(rng.integers(1, 7))
    n = int(rng.integers(1, 5))
    b = random_admissible_factors(rng, d)
    p = expand_scalar_factors(b)
    A0 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    A0 = A0 / np.linalg.norm(A0, 2)
    best = None
    for lam in _disc(rng, 2.0):
        A = complex(lam) * A0
        M = np.eye(n, dtype=complex)
        for bj in b:
            M = M @ (np.eye(n) + bj * A)
        fro = float(np.linalg.norm(M))
        op = float(np.linalg.norm(M, 2))
        fb = functional_bounds(p, A)
        if fb.e1.hypothesis is not Hypothesis.VERIFIED:
            return
        inter = intermediate_bound(p, A)
        checks = [("e1", fro, fb.e1), ("e2", op, fb.e2), ("e3", op, fb.e3),
                  ("intermediate", op, inter)]
        for name, exact, rep in checks:
            report.checks += 1
            if not rep.dominates(exact, SLACK):
                report.violations.append(Violation(trial, name, complex(lam), exact, rep.value))
        # dominance of the intermediate bound by E2
        report.checks += 1
        if inter.log_value > fb.e2.log_value + SLACK * max(1.0, fb.e2.log_value):
            report.violations.append(Violation(trial, "intermediate<=e2", complex(lam),
                                               inter.value, fb.e2.value))
        if fb.exp0:
            report.checks += 1
            cap = n ** (d / 2)
            if exceeds(fro, cap):
                report.violations.append(Violation(trial, "exp0", complex(lam), fro, cap))
        if best is None or abs(lam) > abs(best[0]):
            best = (complex(lam), A, op, fb)
    lam, A, op, fb = best
    sup = von_neumann_sup(p, float(np.linalg.norm(A, 2)), samples=1024)
    report.checks += 3
    # the sampled sup can undershoot slightly; compare with a relative margin
    if op > sup * (1 + 1e-6) + SLACK:
        report.violations.append(Violation(trial, "vn_sup", lam, op, sup))
    if exceeds(sup, fb.e3.value):
        report.violations.append(Violation(trial, "e3>=vn_sup", lam, sup, fb.e3.value))
    if exceeds(sup, fb.e2.value):
        report.violations.append(Violation(trial, "e2>=vn_sup", lam, sup, fb.e2.value))


def _fuzz_lifted(rng, trial, report):
    n = int(rng.integers(1, 4))
    d = int(rng.integers(1, 5))
    B = random_admissible_matrix_factors(rng, n, d)
    P = expand_matrix_factors(B)
    m = int(rng.integers(1, 4))
    T = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    T = rng.uniform(0, 1.5) * T / np.linalg.norm(T, 2)
    lb = lifted_bounds(P, T)
    exact = float(np.linalg.norm(eval_matrix_poly_at_matrix(P, T, "kronecker"), 2))
    report.checks += 1
    if lb.complete.hypothesis is Hypothesis.VERIFIED and not lb.complete.dominates(exact, SLACK):
        report.violations.append(Violation(trial, "complete", complex(np.linalg.norm(T, 2)),
                                           exact, lb.complete.value))
    # scalar multiples of I doubly commute with everything
    t = complex(_disc(rng, 1.0, 1)[0])
    Tc = t * np.eye(n)
    lc = lifted_bounds(P, Tc)
    exact = float(np.linalg.norm(eval_matrix_poly_at_matrix(P, Tc, "doubly-commuting"), 2))
    report.checks += 1
    if lc.mlak.hypothesis is Hypothesis.VERIFIED and not lc.mlak.dominates(exact, SLACK):
        report.violations.append(Violation(trial, "mlak", t, exact, lc.mlak.value))
    Th = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Th = rng.uniform(0, 1) * Th / np.linalg.norm(Th, 2)
    lh = lifted_bounds(P, Th)
    exact = float(np.linalg.norm(eval_matrix_poly_left(P, Th), 2))
    report.checks += 1
    if lh.hartz.hypothesis is Hypothesis.VERIFIED and not lh.hartz.dominates(exact, SLACK):
        report.violations.append(Violation(trial, "hartz", complex(np.linalg.norm(Th, 2)),
                                           exact, lh.hartz.value))


_RUNNERS = {"scalar": _fuzz_scalar, "matrix": _fuzz_matrix,
            "functional": _fuzz_functional, "lifted": _fuzz_lifted}


def fuzz(mode: str, trials: int, seed: int = 0) -> FuzzReport:
    """Run ``trials`` randomized soundness trials; the expected outcome is no violations."""
    if mode not in _RUNNERS:
        raise ValueError(f"unknown mode {mode!r}; choose from {MODES}")
    if trials < 0:
        raise ValueError("trials must be non-negative")
    report = FuzzReport(mode, trials, seed)
    if trials == 0:
        return report
    run = _RUNNERS[mode]
    for trial, child in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        run(np.random.default_rng(child), trial, report)
    return report
