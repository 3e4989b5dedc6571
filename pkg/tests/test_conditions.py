from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_matrix
from szasz.conditions import (elementary_pos_check, elementary_pos_value, im_identity_check,
                              matrix_location_sum, minus_semis_predicate, rank_one_trace,
                              scalar_location_sum, stable_factors, var_semis_check)
from szasz.experiments.examples import semis1_factors, semis2_factors
from szasz.linalg import DimensionError, frobenius_norm, skew_part


def test_scalar_location_examples():
    v = scalar_location_sum([1, -2, 3.5])
    assert v.value == 0 and v.holds
    v = scalar_location_sum([0.5j, -1 - 1j, 1 - 1j])
    assert v.value == pytest.approx(0, abs=1e-15) and v.holds
    v = scalar_location_sum(semis1_factors(2))
    assert v.value == pytest.approx(5 / 6, rel=1e-14) and v.holds


def test_var_semis_examples():
    v = var_semis_check([1j, 1j, 1j])
    assert v.value == pytest.approx(2) and v.holds
    b = semis2_factors(2)
    assert np.allclose(b.imag, [1, 1, -(2 + math.sqrt(3)), -(2 + math.sqrt(3))])
    assert scalar_location_sum(b).value == pytest.approx(0, abs=1e-12)
    assert var_semis_check(b).holds
    v = var_semis_check([1j, -1j])
    assert v.value == pytest.approx(-1) and not v.holds
    assert scalar_location_sum([1j, -1j]).value == pytest.approx(-1)


def test_matrix_location_examples(rng):
    H = [random_matrix(rng, 3) for _ in range(3)]
    H = [X + X.conj().T for X in H]
    v = matrix_location_sum(H)
    assert v.value == pytest.approx(0, abs=1e-14) and v.holds
    v = matrix_location_sum([1j * np.eye(2), 1j * np.eye(2)])
    assert v.value == pytest.approx(2) and v.holds
    v = matrix_location_sum([1j * np.eye(2), -1j * np.eye(2)])
    assert v.value == pytest.approx(-2) and not v.holds
    with pytest.raises(DimensionError):
        matrix_location_sum([np.eye(2), np.eye(3)])


def test_im_identity_examples():
    assert im_identity_check([1j * np.eye(2)]) == pytest.approx((0, 0), abs=1e-14)
    assert im_identity_check([1j * np.eye(2), 1j * np.eye(2)]) == pytest.approx((4, 4))


def test_elementary_pos_examples(rng):
    v = elementary_pos_check(np.eye(2), np.eye(2))
    assert v.value == pytest.approx(0, abs=1e-14) and v.holds
    # C = i B*: factors i v v*, Im = v v* >= 0, so strictly positive
    B = random_matrix(rng, 3, 4)
    v = elementary_pos_check(B, 1j * B.conj().T)
    assert v.value > 1e-6 and v.holds
    # a zero row contributes nothing
    Bz = np.vstack([B, np.zeros((1, 4))])
    C = random_matrix(rng, 4, 3)
    Cz = np.hstack([C, random_matrix(rng, 4, 1)])
    assert elementary_pos_value(Bz, Cz) == pytest.approx(elementary_pos_value(B, C), rel=1e-12)
    with pytest.raises(DimensionError):
        elementary_pos_value(B, random_matrix(rng, 4, 2))


def test_minus_semis_examples(rng):
    G = random_matrix(rng, 3)
    assert minus_semis_predicate([-1j * G @ G.conj().T, -1j * np.eye(3)])
    assert minus_semis_predicate([G + G.conj().T])
    assert not minus_semis_predicate([1j * np.eye(3)])


def test_rank_one_trace_examples(rng):
    e1, e2 = np.eye(2)
    assert rank_one_trace(e1, e1, e1, e1) == 0
    assert rank_one_trace(e1, e2, e2, e1) == -1
    u, v, x, y = (random_matrix(rng, 3, 1).ravel() for _ in range(4))
    assert rank_one_trace(2.5 * u, v, x, y) == pytest.approx(2.5 * rank_one_trace(u, v, x, y))
    with pytest.raises(DimensionError):
        rank_one_trace(e1, e2, np.ones(3), e1)


def test_stable_factors():
    assert stable_factors([1, -1j, 2 - 0.5j])
    assert not stable_factors([1j])


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=12))
def test_location_sum_sign_matches_var_semis(im):
    b = 1j * np.array(im)
    s = scalar_location_sum(b).value
    v = var_semis_check(b).value
    assert v == pytest.approx(2 / len(im) * s, abs=1e-9)
    if abs(s) > 1e-9:
        assert np.sign(s) == np.sign(v)


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(1, 5))
def test_minus_semis_implies_location(seed, n, d):
    rng = np.random.default_rng(seed)
    B = []
    for _ in range(d):
        G = random_matrix(rng, n)
        X = random_matrix(rng, n)
        B.append(X + X.conj().T - 1j * G @ G.conj().T)
    assert minus_semis_predicate(B)
    assert matrix_location_sum(B).holds


def _admissible_scalar(rng, d):
    while True:
        b = rng.standard_normal(d) + 1j * (rng.standard_normal(d) + rng.uniform(-1, 1))
        if scalar_location_sum(b).holds:
            return b


@settings(max_examples=300, deadline=None)
@given(seeds, st.integers(1, 10))
def test_scalar_sum_of_squares_inequality(seed, d):
    b = _admissible_scalar(np.random.default_rng(seed), d)
    a1 = b.sum()
    a2 = 0.5 * (a1 * a1 - np.sum(b * b))
    lhs = np.sum(np.abs(b) ** 2)
    rhs = abs(a1) ** 2 - 2 * a2.real
    assert lhs <= rhs + 1e-9 * max(1, rhs)


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(1, 5))
def test_matrix_sum_of_squares_inequality(seed, n, d):
    rng = np.random.default_rng(seed)
    while True:
        B = [random_matrix(rng, n) * rng.uniform(0.1, 2) for _ in range(d)]
        if matrix_location_sum(B).holds:
            break
    lhs = sum(frobenius_norm(X) ** 2 for X in B)
    pair = sum(B[j] @ B[k] for j in range(d) for k in range(j + 1, d)) if d > 1 else 0
    rhs = frobenius_norm(sum(B)) ** 2 - 2 * np.trace(np.atleast_2d(pair)).real
    assert lhs <= rhs + 1e-9 * max(1, rhs)


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(1, 5))
def test_elementary_pos_matches_location_sum(seed, n, d):
    rng = np.random.default_rng(seed)
    C = random_matrix(rng, n, d)
    B = random_matrix(rng, d, n)
    factors = [np.outer(C[:, j], B[j]) for j in range(d)]
    loc = matrix_location_sum(factors)
    val = elementary_pos_value(B, C)
    assert val == pytest.approx(4 * loc.value, abs=1e-9 * (1 + abs(val)))
    if abs(loc.value) > 1e-8:
        assert elementary_pos_check(B, C).holds == loc.holds


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(1, 4))
def test_rank_one_trace_matches_direct(seed, n):
    rng = np.random.default_rng(seed)
    uj, vj, uk, vk = (random_matrix(rng, n, 1).ravel() for _ in range(4))
    direct = 2 * np.trace(skew_part(np.outer(uj, vj.conj())) @ skew_part(np.outer(uk, vk.conj()))).real
    assert rank_one_trace(uj, vj, uk, vk) == pytest.approx(direct, abs=1e-11 * (1 + abs(direct)))
