from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from utils.brandt import brandt_series, rational_eigensystem
from utils.errors import EmbeddingCountError
from utils.theta32 import (
    closed_form_series,
    cohen_H,
    cusp_G,
    determinant_profile,
    embedding_sum_check,
    g_coefficients,
    optimal_embedding_count,
    primitive_counts,
    representation_check,
    ternary_lattice,
    theta_counts,
    trace_identity_check,
)


@pytest.fixture(scope="module")
def counts11(level11):
    return theta_counts(level11, 200)


def test_ternary_determinant(level2, level11, level66):
    assert determinant_profile(level2) == {0: 16}
    assert set(determinant_profile(level11).values()) == {4 * 11 ** 2}
    assert set(determinant_profile(level66).values()) == {4 * 66 ** 2}


def test_ternary_lattice_is_trace_zero(level11):
    lat = ternary_lattice(level11, 1)
    assert len(lat.basis) == 3
    assert all(b[0] == 0 for b in lat.basis)
    assert lat.class_index == 1


def test_level_2_values(level2):
    H = cohen_H(level2, 12)
    assert H[0] == Fraction(1, 24)
    assert H[3] == Fraction(1, 3)
    assert H[4] == Fraction(1, 4)
    assert H[8] == Fraction(1, 2)
    assert H[12] == Fraction(1, 3)
    assert H[1] == H[2] == H[5] == 0


def test_level_11_theta_equals_closed_form(level11, counts11):
    H = cohen_H(level11, 200, counts11)
    closed = closed_form_series(level11.cfg, 200)
    assert H.coefficients == closed.coefficients
    assert H[3] == Fraction(1, 3)
    assert H[4] == Fraction(1, 2)
    assert H.support_violations() == []


def test_level_66_theta_equals_closed_form(level66):
    H = cohen_H(level66, 150)
    assert H[0] == Fraction(5, 6)
    assert H[4] == 1
    assert H.coefficients == closed_form_series(level66.cfg, 150).coefficients


def test_eichler_level_theta_equals_closed_form(level6):
    H = cohen_H(level6, 150)
    assert H.coefficients == closed_form_series(level6.cfg, 150).coefficients


def test_parallel_counts(level66):
    serial = theta_counts(level66, 60, workers=1)
    parallel = theta_counts(level66, 60, workers=2)
    assert all(np.array_equal(a, b) for a, b in zip(serial, parallel))


def test_g_coefficients(level11, counts11):
    g = g_coefficients(ternary_lattice(level11, 0), 50)
    assert g[0] == Fraction(1, 2)
    assert [2 * c for c in g.coefficients] == [int(c) for c in counts11[0][:51]]


def test_primitive_counts():
    # r_3 of Z^3: primitive vectors of norm 4 do not exist, (2, 0, 0) is imprimitive
    counts = np.array([1, 6, 12, 8, 6, 24, 24, 0, 12, 30], dtype=np.int64)
    prim = primitive_counts(counts)
    assert prim[1] == 6
    assert prim[4] == 0
    assert prim[8] == 0
    assert prim[9] == 24


def test_optimal_embeddings(level11, counts11):
    primitive = [primitive_counts(c) for c in counts11]
    per_class = [optimal_embedding_count(level11, i, -3, primitive[i]) for i in range(2)]
    assert sum(per_class) == 2
    assert sorted(per_class) == [0, 2]
    assert per_class[level11.w.index(3)] == 2
    assert optimal_embedding_count(level11, 0, -4) + optimal_embedding_count(level11, 1, -4) == 2
    with pytest.raises(ValueError):
        optimal_embedding_count(level11, 0, -5)


def test_embedding_count_must_be_integral(level11):
    fake = np.zeros(8, dtype=np.int64)
    fake[7] = 1
    i = level11.w.index(3)
    with pytest.raises(EmbeddingCountError):
        optimal_embedding_count(level11, i, -7, fake)


def test_embedding_sums(level11, counts11):
    rows = embedding_sum_check(level11, 150, counts11)
    assert rows and all(r.ok for r in rows)


def test_embedding_sums_level_66(level66):
    rows = embedding_sum_check(level66, 100)
    assert all(r.ok for r in rows)


def test_representation_numbers(level11, counts11):
    rows = representation_check(level11, 80, counts11)
    assert len(rows) == 80 * 2
    assert all(r.ok for r in rows)


def test_trace_identity(level11):
    matrices = brandt_series(level11, 15)
    H = cohen_H(level11, 60)
    rows = trace_identity_check(matrices, H, 15)
    assert all(r.ok for r in rows)
    assert rows[1].trace == 2
    with pytest.raises(ValueError):
        trace_identity_check(matrices, cohen_H(level11, 20), 15)


def test_trace_identity_eichler(level6):
    matrices = brandt_series(level6, 10)
    rows = trace_identity_check(matrices, cohen_H(level6, 40), 10)
    assert all(r.ok for r in rows if gcd(r.m, 6) == 1)


def test_cusp_series_level_11(level11, counts11):
    eig = rational_eigensystem(level11, brandt_series(level11, 41))
    G = cusp_G(level11, eig, 200, counts11)
    assert G[0] == 0
    assert abs(G[3]) == 1
    assert all(c.denominator == 1 for c in G.coefficients)
    assert G.support_violations() == []


@pytest.fixture(scope="module")
def trace66(level66):
    matrices = brandt_series(level66, 30)
    return trace_identity_check(matrices, cohen_H(level66, 120), 30)


@pytest.mark.parametrize("m", [m for m in range(1, 31) if gcd(m, 66) == 1])
def test_trace_identity_level_66(trace66, m):
    row = trace66[m]
    assert row.m == m
    assert row.trace == row.class_number_sum


def test_trace_identity_level_11_to_30(level11):
    rows = trace_identity_check(brandt_series(level11, 30), cohen_H(level11, 120), 30)
    assert len(rows) == 31
    assert all(r.ok for r in rows)


@pytest.mark.slow
@pytest.mark.parametrize("level", ["level11", "level66", "level210"])
def test_theta_equals_closed_form_to_2000(request, level):
    classes = request.getfixturevalue(level)
    H = cohen_H(classes, 2000)
    closed = closed_form_series(classes.cfg, 2000)
    mismatches = [D for D in range(2001) if H[D] != closed[D]]
    assert mismatches == []
    assert H.support_violations() == []
