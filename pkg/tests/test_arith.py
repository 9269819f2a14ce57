import warnings
from fractions import Fraction

import pytest

from utils.arith import (
    discriminant,
    discriminant_decompositions,
    divisors,
    eichler_symbol,
    factorize,
    from_primes,
    is_discriminant,
    is_fundamental_discriminant,
    kronecker,
    mobius,
    primes_not_dividing,
    rational_gcd,
    rational_mod,
    restricted_sigma,
)


def test_factorize():
    f = factorize(12)
    assert f.factors == ((2, 2), (3, 1))
    assert f.primes == (2, 3)
    assert f.omega == 2
    assert not f.is_squarefree
    assert str(f) == "2^2.3"
    assert str(factorize(1)) == "1"
    with pytest.raises(ValueError):
        factorize(0)


def test_from_primes():
    f = from_primes([3, 2, 11])
    assert f.value == 66
    assert f.is_squarefree
    with pytest.raises(ValueError):
        from_primes([4])


@pytest.mark.parametrize(
    "d, n, expected",
    [
        (-3, 2, -1),
        (-7, 2, 1),
        (-4, 2, 0),
        (-3, 3, 0),
        (-3, 7, 1),
        (-3, 11, -1),
        (-4, 11, -1),
        (-7, 11, 1),
        (-1, -1, -1),
        (5, -1, 1),
    ],
)
def test_kronecker(d, n, expected):
    assert kronecker(d, n) == expected


def test_discriminant_conductor():
    assert discriminant(-12).conductor == 2
    assert discriminant(-12).fundamental == -3
    assert discriminant(-16).conductor == 2
    assert discriminant(-16).fundamental == -4
    assert discriminant(-27).conductor == 3
    assert discriminant(-8).is_fundamental
    with pytest.raises(ValueError):
        discriminant(-5)


def test_fundamental_discriminants():
    assert [d for d in range(-3, -25, -1) if is_fundamental_discriminant(d)] == [-3, -4, -7, -8, -11, -15, -19, -20, -23, -24]
    assert not is_discriminant(-5)
    assert not is_discriminant(3)


def test_eichler_symbol():
    assert eichler_symbol(12, 2) == 1  # 2 divides the conductor of -12
    assert eichler_symbol(27, 3) == 1
    assert eichler_symbol(3, 3) == 0
    assert eichler_symbol(7, 2) == 1
    assert eichler_symbol(3, 2) == -1
    assert eichler_symbol(4, 2) == 0


def test_discriminant_decompositions():
    pairs = [(disc.d, f) for disc, f in discriminant_decompositions(12)]
    assert pairs == [(-12, 1), (-3, 2)]
    pairs = [(disc.d, f) for disc, f in discriminant_decompositions(16)]
    assert pairs == [(-16, 1), (-4, 2)]
    assert discriminant_decompositions(5) == []


def test_divisor_functions():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert restricted_sigma(12, [2]) == 4
    assert [mobius(n) for n in (1, 2, 4, 6, 30)] == [1, -1, 0, 1, -1]


def test_primes_not_dividing():
    assert primes_not_dividing(6, count=3) == [5, 7, 11]
    assert primes_not_dividing(11, upto=10) == [2, 3, 5, 7]


def test_rational_mod():
    assert rational_mod(Fraction(1, 3), 5) == 2
    assert rational_mod(Fraction(-7, 2), 5) == 4
    with pytest.raises(ValueError):
        rational_mod(Fraction(1, 5), 5)


def test_rational_gcd():
    assert rational_gcd([Fraction(1, 2), Fraction(3, 4)]) == Fraction(1, 4)
    assert rational_gcd([2, 3]) == 1
    assert rational_gcd([Fraction(6), Fraction(4)]) == 2


def test_symbols_emit_no_deprecation_warnings():
    from utils.quatalg import hilbert_symbol

    with warnings.catch_warnings():
        warnings.simplefilter("error", DeprecationWarning)
        assert kronecker(-3, 97) == 1
        assert kronecker(-3, 101) == -1
        assert hilbert_symbol(-1, -3, 3) == -1
        assert hilbert_symbol(-1, -1, 3) == 1
