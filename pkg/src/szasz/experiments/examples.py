"""Worked examples with their reference values, each returning a checkable report."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..bounds import Hypothesis, functional_bounds, numerical_range_certificate, von_neumann_sup
from ..conditions import scalar_location_sum, var_semis_check
from ..poly import MatrixPoly, expand_scalar_factors
from .cmv import cmv_limit, cmv_sequence, cn_lower_bound_check

EXAMPLE_IDS = ("semis1", "semis2", "hyperstable", "cmv", "comparison", "vn-comparison")


@dataclass
class Check:
    name: str
    expected: object
    actual: object
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "expected": _jsonable(self.expected),
                "actual": _jsonable(self.actual), "passed": self.passed}


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass
class ExampleReport:
    example: str
    params: dict
    quantities: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def close(self, name: str, expected, actual, rtol: float = 0.0, atol: float = 0.0) -> bool:
        ok = bool(abs(complex(actual) - complex(expected)) <= atol + rtol * abs(complex(expected)))
        self.checks.append(Check(name, expected, actual, ok))
        return ok

    def require(self, name: str, ok: bool, actual=None) -> bool:
        self.checks.append(Check(name, True, actual if actual is not None else bool(ok), bool(ok)))
        return bool(ok)

    def to_json(self) -> dict:
        return {"example": self.example, "params": self.params, "passed": self.passed,
                "quantities": {k: _jsonable(v) for k, v in self.quantities.items()},
                "checks": [c.to_json() for c in self.checks]}


def semis1_factors(c: int) -> np.ndarray:
    """``b`` for ``(1 + i lam/(c+1)) (1 - (i+1) lam/c)^c (1 - (i-1) lam/c)^c``."""
    if c < 1:
        raise ValueError("c must be a positive integer")
    return np.array([1j / (c + 1)] + [-(1j + 1) / c] * c + [-(1j - 1) / c] * c)


def semis2_factors(k: int, real_parts=None) -> np.ndarray:
    """``k`` factors with ``Im b = 1`` and ``k`` with ``Im b = -(k + sqrt(2k-1))/(k-1)``."""
    if k < 2:
        raise ValueError("k must be at least 2")
    im = np.array([1.0] * k + [-(k + math.sqrt(2 * k - 1)) / (k - 1)] * k)
    re = np.zeros(2 * k) if real_parts is None else np.asarray(real_parts, dtype=float)
    return re + 1j * im


def _in_open_half_plane(points) -> bool:
    # whether some open half-plane through 0 contains every point
    a = np.sort(np.mod(np.angle(points), 2 * np.pi))
    gaps = np.diff(np.concatenate([a, [a[0] + 2 * np.pi]]))
    return bool(np.max(gaps) > np.pi)


def run_semis1(c: int = 1) -> ExampleReport:
    rep = ExampleReport("semis1", {"c": c})
    b = semis1_factors(c)
    p = expand_scalar_factors(b)
    loc = scalar_location_sum(b)
    rep.quantities.update(location_sum=loc.value, a1=p.a1, a2=p.a2, degree=p.degree)
    rep.close("location_sum", (2 * c * c - c - 1) / (c * c + c), loc.value, rtol=1e-12, atol=1e-12)
    rep.require("location_holds", loc.holds)
    rep.require("var_semis_holds", var_semis_check(b).holds)
    rep.close("a1", (1 / (c + 1) - 2) * 1j, p.a1, rtol=1e-12, atol=1e-12)
    rep.close("a2", -2 * c / (c + 1), p.a2, rtol=1e-12, atol=1e-12)
    roots = -1 / np.unique(np.round(b, 14))
    rep.quantities["roots"] = [complex(z) for z in roots]
    rep.require("roots_in_no_half_plane", not _in_open_half_plane(roots))
    return rep


def run_semis2(k: int = 2) -> ExampleReport:
    rep = ExampleReport("semis2", {"k": k})
    b = semis2_factors(k)
    loc = scalar_location_sum(b)
    rep.quantities.update(location_sum=loc.value, imag_parts=list(b.imag))
    rep.close("location_sum", 0.0, loc.value, atol=1e-9)
    rep.require("location_holds", loc.holds)
    n_up = int(np.sum(b.imag > 0))
    rep.require("balanced_sides", n_up == k, n_up)
    return rep


def hyperstable_poly(d: int) -> MatrixPoly:
    """``[[1, lam^d], [0, 1]]``: ``A_1 = A_2 = 0`` for ``d >= 3``."""
    A = np.zeros((d, 2, 2), complex)
    A[d - 1, 0, 1] = 1.0
    return MatrixPoly(2, A)


def run_hyperstable(d: int = 3, grid=None) -> ExampleReport:
    if d < 3:
        raise ValueError("d must be at least 3")
    rep = ExampleReport("hyperstable", {"d": d})
    P = hyperstable_poly(d)
    if grid is None:
        radii = np.linspace(0.0, 4.0, 9)
        grid = [r * np.exp(1j * t) for r in radii for t in (0.0, 0.7, 2.0, math.pi)]
    worst_f = 0.0
    op_ok = True
    for lam in grid:
        M = P(lam)
        r = abs(lam)
        closed = math.sqrt(2 + r ** (2 * d))
        worst_f = max(worst_f, abs(np.linalg.norm(M) - closed) / closed)
        op_ok &= np.linalg.norm(M, 2) >= math.sqrt(1 + r ** (2 * d) / 2) * (1 - 1e-12)
    rep.quantities["max_rel_error_frobenius"] = worst_f
    rep.require("frobenius_closed_form", worst_f <= 1e-12, worst_f)
    rep.require("operator_lower_bound", op_ok)
    rep.require("A1_A2_zero", not np.any(P.A1) and not np.any(P.A2))
    at4 = math.sqrt(2 + 4.0 ** (2 * d))
    rep.quantities["frobenius_at_4"] = at4
    rep.require("exceeds_prefactor_at_4", at4 > 2 ** (d / 2), at4)
    cert = numerical_range_certificate(P)
    rep.quantities["numerical_range_half_plane"] = cert.value
    rep.require("numerical_range_not_in_half_plane", cert is Hypothesis.VIOLATED, cert.value)
    return rep


def run_cmv(n: int = 2, y: float = 1.0, ks=(10, 100, 1000)) -> ExampleReport:
    rep = ExampleReport("cmv", {"n": n, "y": y, "ks": list(ks)})
    limit = cmv_limit(n, y)
    errs = [abs(cmv_sequence(n, y, k) - limit) / limit for k in ks]
    rep.quantities.update(limit=limit, rel_errors=errs)
    rep.require("errors_decreasing", all(a > b for a, b in zip(errs, errs[1:])), errs)
    rep.require("final_error_below_2pct", errs[-1] < 0.02, errs[-1])
    if y > 0:
        chk = cn_lower_bound_check(n, y)
        applies = n * y >= 2  # below this the floor can exceed the ratio
        rep.quantities.update(cn_ratio=chk.ratio, cn_floor=chk.floor, cn_floor_applies=applies)
        if applies:
            rep.require("cn_ratio_at_least_floor", chk.holds)
        if y == 1.0:
            rep.close("cn_floor_e^(n/2)", math.exp(n / 2), chk.floor, rtol=1e-12)
    return rep


COMPARISON_CASES = {
    "a": ([-1, -1, -1], np.diag([2.0, 0.0]),
          (2 * math.sqrt(2), math.exp(6), math.exp(12))),
    "b": ([-1, -1, -1], np.diag([-2.0, 0.0]),
          (2 * math.sqrt(2) * math.exp(6), math.exp(6), math.exp(12))),
    "c": ([-1, -1, 1], -np.eye(2),
          (2 * math.sqrt(2) * math.exp(2.5), math.exp(3), math.exp(2.5))),
}


def run_comparison() -> ExampleReport:
    rep = ExampleReport("comparison", {})
    s2 = math.sqrt(2)
    for case, (b, A, expected) in COMPARISON_CASES.items():
        p = expand_scalar_factors(b)
        fb = functional_bounds(p, A)
        vals = (fb.e1.value, fb.e2.value, fb.e3.value)
        rep.quantities[case] = vals
        for name, exp_v, got in zip(("E1", "E2", "E3"), expected, vals):
            rep.close(f"{case}.{name}", exp_v, got, rtol=1e-12)
        e1, e2, e3 = vals
        order = {"a": e1 < e2 < e3, "b": s2 * e2 < e1 < e3, "c": s2 * e3 < s2 * e2 < e1}[case]
        rep.require(f"{case}.ordering", order)
        pA = p.at_matrix(A)
        rep.require(f"{case}.sound", np.linalg.norm(pA) <= e1 * (1 + 1e-12)
                    and np.linalg.norm(pA, 2) <= min(e2, e3) * (1 + 1e-12))
    return rep


def run_vn_comparison() -> ExampleReport:
    rep = ExampleReport("vn-comparison", {})
    p = expand_scalar_factors([-1, -1, -1])
    A = np.diag([2.0, 0.0])
    sup = von_neumann_sup(p, float(np.linalg.norm(A, 2)))
    e1 = functional_bounds(p, A).e1.value
    rep.quantities.update(vn_sup=sup, e1=e1, exact_op=float(np.linalg.norm(p.at_matrix(A), 2)))
    rep.close("vn_sup", 27.0, sup, atol=1e-6)
    rep.require("e1_below_vn_sup", e1 < sup, (e1, sup))
    return rep


RUNNERS: dict[str, Callable[..., ExampleReport]] = {
    "semis1": run_semis1,
    "semis2": run_semis2,
    "hyperstable": run_hyperstable,
    "cmv": run_cmv,
    "comparison": run_comparison,
    "vn-comparison": run_vn_comparison,
}


def run_example(example_id: str, **params) -> ExampleReport:
    try:
        runner = RUNNERS[example_id]
    except KeyError:
        raise ValueError(f"unknown example {example_id!r}; choose from {EXAMPLE_IDS}") from None
    return runner(**params)
