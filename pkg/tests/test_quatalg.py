import random
from fractions import Fraction

import pytest

from utils.quatalg import (
    INFINITY,
    QuaternionAlgebra,
    construct_algebra,
    hilbert_symbol,
    product_formula_holds,
    ramified_primes,
)


@pytest.mark.parametrize(
    "a, b, p, expected",
    [
        (-1, -1, 2, -1),
        (-1, -1, 3, 1),
        (-1, -1, INFINITY, -1),
        (2, 3, INFINITY, 1),
        (-1, -3, 3, -1),
        (-1, -3, 2, 1),
        (Fraction(-1, 4), -1, 2, -1),
    ],
)
def test_hilbert_symbol(a, b, p, expected):
    assert hilbert_symbol(a, b, p) == expected


def test_hilbert_symbol_rejects_zero():
    with pytest.raises(ValueError):
        hilbert_symbol(0, -1, 3)


@pytest.mark.parametrize("S", [[2], [3], [5], [11], [37], [2, 3, 11], [2, 3, 7]])
def test_construct_algebra(S):
    B = construct_algebra(S)
    assert B.ramified == tuple(S)
    assert ramified_primes(B.a, B.b) == tuple(S)
    assert B.a < 0 and B.b < 0
    assert product_formula_holds(B)


def test_construct_algebra_is_deterministic():
    assert construct_algebra([2]) == QuaternionAlgebra(-1, -1)
    assert construct_algebra([11]) == construct_algebra([11])


@pytest.mark.parametrize("S", [[], [2, 3], [4]])
def test_construct_algebra_rejects(S):
    with pytest.raises(ValueError):
        construct_algebra(S)


def test_indefinite_algebra_rejected():
    with pytest.raises(ValueError):
        QuaternionAlgebra(1, -1)


def test_element_arithmetic():
    B = QuaternionAlgebra(-1, -3)
    one, i, j, k = B.basis()
    assert i * j == k
    assert j * i == -k
    assert i * i == -1 * one
    assert j * j == -3 * one
    assert k * k == -3 * one
    x = B.element(1, 2, -1, Fraction(1, 2))
    y = B.element(0, 1, 3, -2)
    assert (x * y).norm() == x.norm() * y.norm()
    assert x * x.conj() == x.norm() * one
    assert x.trace() == 2
    assert (x + y) - y == x
    assert B.reduced_norm((x + y).coords) == x.norm() + 2 * B.bilinear(x.coords, y.coords) + y.norm()


def test_mixing_algebras_fails():
    x = QuaternionAlgebra(-1, -1).one()
    y = QuaternionAlgebra(-1, -3).one()
    with pytest.raises(ValueError):
        x * y


def test_basis_relations():
    B = QuaternionAlgebra(-2, -5)
    _, i, _, _ = B.basis()
    assert i.trace() == 0
    assert i.norm() == 2


def _random_element(B, rng):
    return B.element(*(Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(4)))


def test_norm_multiplicative_trace_linear_conj_anti_involution():
    rng = random.Random(1729)
    B = construct_algebra([2, 3, 11])
    for _ in range(1000):
        x = _random_element(B, rng)
        y = _random_element(B, rng)
        assert (x * y).norm() == x.norm() * y.norm()
        assert (x + y).trace() == x.trace() + y.trace()
        assert (x * y).conj() == y.conj() * x.conj()
