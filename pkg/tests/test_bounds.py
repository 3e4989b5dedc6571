from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_matrix
from szasz.bounds import (BoundId, Hypothesis, InconsistencyError, de_branges, functional_bounds,
                          intermediate_bound, lh_bound, lifted_bounds, matrix_factored_bound,
                          numerical_range_certificate, realization_bound, szasz_original,
                          von_neumann_sup, vn_sup_report)
from szasz.experiments.cmv import cmv_polynomial
from szasz.experiments.fuzz import random_admissible_factors, random_admissible_matrix_factors
from szasz.poly import (MatrixPoly, ScalarPoly, eval_matrix_poly_at_matrix, eval_matrix_poly_left,
                        expand_matrix_factors, expand_scalar_factors)
from szasz.realization import build_realization

CUBE = expand_scalar_factors([-1, -1, -1])
E = math.e


def test_szasz_original_examples():
    assert szasz_original(CUBE, 0).value == 1
    assert szasz_original(CUBE, 1).log_value == pytest.approx(39)
    r = szasz_original(expand_scalar_factors([1]), 1j)
    assert r.value == pytest.approx(E ** 4) and r.hypothesis is Hypothesis.VERIFIED
    assert szasz_original(CUBE, 0).hypothesis is Hypothesis.VERIFIED
    assert szasz_original(expand_scalar_factors([1j]), 1).hypothesis is Hypothesis.VIOLATED
    assert szasz_original(ScalarPoly([1.0]), 1).hypothesis is Hypothesis.UNCHECKED


def test_de_branges_examples():
    assert de_branges(CUBE, 0).value == 1
    for y in (0.5, 1.0, 2.0):
        assert de_branges(CUBE, 1j * y).log_value == pytest.approx(1.5 * y * y)
    p = expand_scalar_factors([1j])
    r = de_branges(p, 1j)
    assert r.value == pytest.approx(E ** -0.5)
    assert abs(p(1j)) == 0 and r.dominates(abs(p(1j)))


def test_lh_examples():
    P = MatrixPoly(2, [1j * np.eye(2)])
    r = lh_bound(P, 1)
    assert r.value == pytest.approx(2 * math.sqrt(E))
    assert np.linalg.norm(P(1), 2) == pytest.approx(math.sqrt(2))
    assert r.dominates(math.sqrt(2))
    assert lh_bound(P, 0).value == pytest.approx(2)
    A1 = -np.array([[2.0, 0.5], [0.5, 1.0]])  # Hermitian negative definite
    t = 0.7
    r = lh_bound(MatrixPoly(2, [A1]), t)
    expected = 2 * math.exp(t * np.linalg.eigvalsh(A1).max() + 0.5 * t * t * np.linalg.norm(A1, 2) ** 2)
    assert r.value == pytest.approx(expected, rel=1e-12)


def test_numerical_range_certificate():
    # I + lam(-i I): numerical range is {-i}
    assert numerical_range_certificate(MatrixPoly(2, [-1j * np.eye(2)])) is Hypothesis.VERIFIED
    A = np.zeros((3, 2, 2))
    A[2, 0, 1] = 1
    assert numerical_range_certificate(MatrixPoly(2, A)) is Hypothesis.VIOLATED
    assert lh_bound(MatrixPoly(2, A), 1, certificate=True).hypothesis is Hypothesis.VIOLATED


def test_factored_examples():
    P = expand_matrix_factors([np.eye(2), np.eye(2)])
    assert matrix_factored_bound(P, 0).value == pytest.approx(2)
    for n, y, k in ((2, 1.0, 1), (3, 0.5, 4)):
        Pc = cmv_polynomial(n, k)
        J = np.ones((n, n))
        Q = MatrixPoly(n, [J, -np.eye(n)])
        r = matrix_factored_bound(Q, 1j * y, d=3 * k)
        assert r.log_value == pytest.approx(1.5 * k * math.log(n) + (n / 2 + 1) * y * y, rel=1e-13)
        assert np.allclose(Pc.A1, J) and np.allclose(Pc.A2, -np.eye(n))
    e = np.zeros((2, 2))
    e[0, 0] = 1
    Ps = expand_matrix_factors([-1j * e])
    r = matrix_factored_bound(Ps, 1)
    assert r.value == pytest.approx(math.sqrt(2) * E ** 0.25)
    assert r.dominates(math.sqrt(3)) and r.hypothesis is Hypothesis.VERIFIED
    with pytest.raises(ValueError):
        matrix_factored_bound(MatrixPoly(2, [e]), 1)


def test_realization_bound_examples(rng):
    e = list(np.eye(2))
    R = build_realization(e, e)
    assert realization_bound(R, 0).value == pytest.approx(2)
    assert realization_bound(R, 1).value == pytest.approx(2 * E ** 1.5)
    R = build_realization([random_matrix(rng, 3, 1).ravel() for _ in range(4)],
                          [random_matrix(rng, 3, 1).ravel() for _ in range(4)])
    assert realization_bound(R, 0).value == pytest.approx(3 ** 2)


def test_realization_bound_sign_of_second_coefficient():
    # b = (1, -1): a plain scalar case where only the minus sign on CAB is sound
    R = build_realization([np.array([1.0]), np.array([-1.0])], [np.array([1.0]), np.array([1.0])])
    lam = 1j
    exact = abs((1 + lam) * (1 - lam))
    assert realization_bound(R, lam).dominates(exact)
    assert realization_bound(R, lam).value == pytest.approx(
        matrix_factored_bound(R.to_matrix_poly(), lam).value, rel=1e-12)


@pytest.mark.parametrize("b, A, expected", [
    ([-1, -1, -1], np.diag([2.0, 0.0]), (2 * math.sqrt(2), E ** 6, E ** 12)),
    ([-1, -1, -1], np.diag([-2.0, 0.0]), (2 * math.sqrt(2) * E ** 6, E ** 6, E ** 12)),
    ([-1, -1, 1], -np.eye(2), (2 * math.sqrt(2) * E ** 2.5, E ** 3, E ** 2.5)),
])
def test_functional_examples(b, A, expected):
    fb = functional_bounds(expand_scalar_factors(b), A)
    got = (fb.e1.value, fb.e2.value, fb.e3.value)
    assert got == pytest.approx(expected, rel=1e-12)


def test_functional_inconsistency_raises():
    # a factored polynomial with q < 0 can only come from a broken expansion
    p = ScalarPoly.__new__(ScalarPoly)
    object.__setattr__(p, "coeffs", np.array([0.0, 5.0], complex))
    object.__setattr__(p, "factors", np.array([1.0, 1.0], complex))
    with pytest.raises(InconsistencyError):
        functional_bounds(p, np.eye(2))


def test_functional_out_of_range_is_flagged():
    p = expand_scalar_factors([1j, -1j])  # location sum -1, q = -2
    fb = functional_bounds(p, np.eye(2))
    assert fb.e1.hypothesis is Hypothesis.VIOLATED
    assert fb.e2.value == 1.0


def test_intermediate_examples():
    assert intermediate_bound(CUBE, np.zeros((2, 2))).value == 1
    A = np.diag([2.0, 0.0])
    assert intermediate_bound(CUBE, A).value == pytest.approx(E ** 6)
    assert intermediate_bound(CUBE, A).value == pytest.approx(functional_bounds(CUBE, A).e2.value)
    p = expand_scalar_factors([-1, -1, -4])
    A = np.eye(2)
    inter = intermediate_bound(p, A).log_value
    e2 = functional_bounds(p, A).e2.log_value
    assert inter == pytest.approx(6) and e2 == pytest.approx(math.sqrt(54))
    assert inter < e2
    with pytest.raises(ValueError):
        intermediate_bound(ScalarPoly([1.0]), A)


def test_von_neumann_examples():
    assert von_neumann_sup(CUBE, 2) == pytest.approx(27, abs=1e-6)
    assert von_neumann_sup(lambda z: np.ones_like(z), 3.0) == pytest.approx(1)
    for d in (1, 3, 5):
        assert von_neumann_sup(lambda z, d=d: z ** d, 1.3) == pytest.approx(1.3 ** d, rel=1e-12)
    assert von_neumann_sup(CUBE, 0) == 1
    assert vn_sup_report(CUBE, 2).value == pytest.approx(27, abs=1e-6)


def test_von_neumann_matrix_poly(rng):
    P = expand_matrix_factors([random_matrix(rng, 2) * 0.3 for _ in range(3)])
    sup = von_neumann_sup(P, 1.0)
    pts = np.exp(2j * np.pi * rng.uniform(size=200))
    assert max(np.linalg.norm(P(z), 2) for z in pts) <= sup * (1 + 1e-9)


def test_lifted_examples(rng):
    B = random_admissible_matrix_factors(rng, 2, 3)
    P = expand_matrix_factors(B)
    lb = lifted_bounds(P, np.zeros((2, 2)))
    assert lb.complete.value == pytest.approx(2 ** 1.5)
    assert lb.hartz.value == pytest.approx(math.sqrt(2 ** 3 * (P.degree + 1)))
    for rep in lb:
        assert rep.dominates(1.0)
    t = 0.8
    lc = lifted_bounds(P, t * np.eye(2))
    assert lc.mlak.hypothesis is Hypothesis.VERIFIED
    assert lc.mlak.dominates(np.linalg.norm(P(t), 2))
    e = np.zeros((3, 3))
    e[0, 0] = 1
    P1 = expand_matrix_factors([-1j * e])
    T = random_matrix(rng, 4)
    T = 0.9 * T / np.linalg.norm(T, 2)
    r = lifted_bounds(P1, T).complete
    assert r.value == pytest.approx(math.sqrt(3) * math.exp(0.9 / 3 + 0.81 / 6), rel=1e-12)
    assert r.dominates(np.linalg.norm(eval_matrix_poly_at_matrix(P1, T), 2))
    # not a contraction: flagged, still computed
    lb = lifted_bounds(P, 3 * np.eye(2))
    assert lb.mlak.hypothesis is Hypothesis.VIOLATED and math.isfinite(lb.mlak.value)


def test_report_json():
    d = de_branges(CUBE, 1j).to_json()
    assert d["bound_id"] == "debranges" and d["hypothesis"] == "verified"
    assert {b.value for b in BoundId} == {"szasz1943", "debranges", "lh", "factored", "realization",
                                         "e1", "e2", "e3", "intermediate", "vn_sup", "complete",
                                         "mlak", "hartz"}


def test_overflowing_bound_dominates():
    r = de_branges(CUBE, 1000j)
    assert r.value == math.inf and r.dominates(1e300)


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(1, 6), st.integers(1, 4))
def test_intermediate_below_e2(seed, d, n):
    rng = np.random.default_rng(seed)
    p = expand_scalar_factors(random_admissible_factors(rng, d))
    A = random_matrix(rng, n) * rng.uniform(0, 2)
    fb = functional_bounds(p, A)
    if fb.e2.hypothesis is Hypothesis.VERIFIED:
        assert intermediate_bound(p, A).log_value <= fb.e2.log_value * (1 + 1e-9) + 1e-9


@settings(max_examples=100, deadline=None)
@given(seeds, st.integers(1, 6), st.floats(0.1, 2.0))
def test_operator_bounds_dominate_circle_sup(seed, d, r):
    rng = np.random.default_rng(seed)
    p = expand_scalar_factors(random_admissible_factors(rng, d))
    A = r * np.eye(1)
    fb = functional_bounds(p, A)
    if fb.e2.hypothesis is Hypothesis.VERIFIED:
        sup = von_neumann_sup(p, r, samples=1024)
        assert sup <= fb.e3.value * (1 + 1e-9)
        assert sup <= fb.e2.value * (1 + 1e-9)


@settings(max_examples=100, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(1, 5))
def test_realization_bound_equals_factored(seed, n, d):
    rng = np.random.default_rng(seed)
    R = build_realization([random_matrix(rng, n, 1).ravel() for _ in range(d)],
                          [random_matrix(rng, n, 1).ravel() for _ in range(d)])
    P = expand_matrix_factors(R.rank_one_factors())
    for lam in rng.standard_normal(10) + 1j * rng.standard_normal(10):
        a = realization_bound(R, lam).log_value
        b = matrix_factored_bound(P, lam).log_value
        assert math.exp(abs(a - b)) - 1 <= 1e-12


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(1, 8))
def test_de_branges_sound_on_stable_factors(seed, d):
    rng = np.random.default_rng(seed)
    b = rng.standard_normal(d) - 1j * np.abs(rng.standard_normal(d))
    p = expand_scalar_factors(b)
    for lam in 4 * np.sqrt(rng.uniform(size=10)) * np.exp(2j * np.pi * rng.uniform(size=10)):
        assert abs(np.prod(1 + lam * b)) <= de_branges(p, lam).value + 1e-9


@settings(max_examples=100, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(1, 5))
def test_factored_bound_sound(seed, n, d):
    rng = np.random.default_rng(seed)
    B = random_admissible_matrix_factors(rng, n, d)
    P = expand_matrix_factors(B)
    for lam in 3 * (rng.standard_normal(10) + 1j * rng.standard_normal(10)) / 2:
        assert matrix_factored_bound(P, lam).dominates(np.linalg.norm(P(lam)))


@settings(max_examples=100, deadline=None)
@given(seeds, st.integers(1, 6), st.integers(1, 4))
def test_functional_bounds_sound(seed, d, n):
    rng = np.random.default_rng(seed)
    p = expand_scalar_factors(random_admissible_factors(rng, d))
    A = random_matrix(rng, n) * rng.uniform(0, 2) / math.sqrt(n)
    fb = functional_bounds(p, A)
    if fb.e1.hypothesis is not Hypothesis.VERIFIED:
        return
    M = p.at_matrix(A)
    assert fb.e1.dominates(np.linalg.norm(M))
    assert fb.e2.dominates(np.linalg.norm(M, 2)) and fb.e3.dominates(np.linalg.norm(M, 2))
    if fb.exp0:
        assert np.linalg.norm(M) <= n ** (d / 2) * (1 + 1e-9)


@settings(max_examples=100, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 4))
def test_hartz_sound_on_contractions(seed, n, d):
    rng = np.random.default_rng(seed)
    P = expand_matrix_factors(random_admissible_matrix_factors(rng, n, d))
    T = random_matrix(rng, n)
    T = rng.uniform(0, 1) * T / np.linalg.norm(T, 2)
    lb = lifted_bounds(P, T)
    if lb.hartz.hypothesis is Hypothesis.VERIFIED:
        assert lb.hartz.dominates(np.linalg.norm(eval_matrix_poly_left(P, T), 2))
