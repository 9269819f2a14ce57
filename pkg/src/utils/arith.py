"""
Integer arithmetic primitives: factorizations, Kronecker and Eichler symbols,
imaginary quadratic discriminants.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, List, Tuple

from sympy import factorint, isprime, nextprime
from sympy.functions.combinatorial.numbers import jacobi_symbol


@dataclass(frozen=True)
class FactoredInt:
    """A positive integer together with its sorted prime factorization"""

    value: int
    factors: Tuple[Tuple[int, int], ...]

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def omega(self) -> int:
        """Number of distinct prime factors"""
        return len(self.factors)

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return ".".join(str(p) if e == 1 else f"{p}^{e}" for p, e in self.factors)


@lru_cache(maxsize=4096)
def factorize(n: int) -> FactoredInt:
    """Factor a positive integer.

    Args:
        n: integer >= 1

    Returns:
        FactoredInt with factors sorted by prime
    """
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    return FactoredInt(n, tuple(sorted(factorint(n).items())))


def from_primes(primes: Iterable[int]) -> FactoredInt:
    """Square-free FactoredInt built from a set of distinct primes."""
    ps = sorted(set(primes))
    for p in ps:
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
    value = 1
    for p in ps:
        value *= p
    return FactoredInt(value, tuple((p, 1) for p in ps))


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n).

    The extension to n = 2 is (d/2) = 0 for even d, +1 for d = ±1 mod 8 and
    -1 for d = ±3 mod 8; for n = -1 it is the sign of d.
    """
    if n == 0:
        raise ValueError("kronecker symbol undefined for n = 0")
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -1
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5) and twos % 2 == 1:
            result = -result
    if n == 1:
        return result
    return result * int(jacobi_symbol(d % n, n))


@dataclass(frozen=True)
class Discriminant:
    """Negative discriminant d = d0 * f^2 of an imaginary quadratic order"""

    d: int
    conductor: int

    @property
    def fundamental(self) -> int:
        return self.d // (self.conductor * self.conductor)

    @property
    def is_fundamental(self) -> bool:
        return self.conductor == 1


def is_discriminant(d: int) -> bool:
    return d < 0 and d % 4 in (0, 1)


@lru_cache(maxsize=8192)
def discriminant(d: int) -> Discriminant:
    """Validate a negative discriminant and compute its conductor."""
    if not is_discriminant(d):
        raise ValueError(f"{d} is not a negative discriminant")
    f = 1
    d0 = d
    for p, e in factorint(-d).items():
        if p == 2:
            continue
        k = e // 2
        if k:
            f *= p ** k
            d0 //= p ** (2 * k)
    while d0 % 4 == 0 and (d0 // 4) % 4 in (0, 1):
        d0 //= 4
        f *= 2
    return Discriminant(d, f)


def is_fundamental_discriminant(d: int) -> bool:
    return is_discriminant(d) and discriminant(d).conductor == 1


def eichler_symbol(D: int, p: int) -> int:
    """Eichler symbol {-D/p} of the quadratic order of discriminant -D.

    Equal to 1 when p divides the conductor of -D and to kronecker(-D, p)
    otherwise. For odd p this is the rule 1 / 0 / kronecker for p^2 | D,
    p || D and p not dividing D. When -D is not a discriminant that rule is
    applied literally.
    """
    if D <= 0:
        raise ValueError(f"eichler_symbol expects D > 0, got {D}")
    if is_discriminant(-D):
        if discriminant(-D).conductor % p == 0:
            return 1
        return kronecker(-D, p)
    if D % (p * p) == 0:
        return 1
    if D % p == 0:
        return 0
    return kronecker(-D, p)


def discriminant_decompositions(D: int) -> List[Tuple[Discriminant, int]]:
    """All (d, f) with -D = d f^2 and d a discriminant, sorted by f."""
    if D <= 0:
        raise ValueError(f"expected D > 0, got {D}")
    out = []
    for f in range(1, isqrt(D) + 1):
        if D % (f * f):
            continue
        d = -(D // (f * f))
        if d % 4 in (0, 1):
            out.append((discriminant(d), f))
    return out


def divisors(n: int) -> List[int]:
    ds = [1]
    for p, e in factorize(n).factors:
        ds = [d * p ** k for d in ds for k in range(e + 1)]
    return sorted(ds)


def restricted_sigma(n: int, excluded: Iterable[int]) -> int:
    """Sum of divisors of n that are coprime to every prime in `excluded`."""
    excluded = tuple(excluded)
    return sum(d for d in divisors(n) if all(d % p for p in excluded))


def mobius(n: int) -> int:
    fac = factorize(n).factors
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def primes_not_dividing(n: int, count: int = None, upto: int = None) -> List[int]:
    """Primes coprime to n in increasing order, by count or by bound."""
    out = []
    p = 2
    while True:
        if upto is not None and p > upto:
            break
        if n % p:
            out.append(p)
            if count is not None and len(out) >= count:
                break
        p = nextprime(p)
    return out


def rational_mod(x: Fraction, l: int) -> int:
    """Reduce a rational with denominator prime to l into Z/l."""
    x = Fraction(x)
    if x.denominator % l == 0:
        raise ValueError(f"denominator of {x} is divisible by {l}")
    return x.numerator * pow(x.denominator, -1, l) % l


def rational_gcd(values: Iterable[Fraction]) -> Fraction:
    """Positive generator of the Z-module spanned by rationals."""
    values = [Fraction(v) for v in values]
    den = 1
    for v in values:
        den = den * v.denominator // gcd(den, v.denominator)
    g = 0
    for v in values:
        g = gcd(g, int(v * den))
    return Fraction(g, den)
