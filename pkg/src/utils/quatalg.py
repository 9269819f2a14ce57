"""
Definite quaternion algebras over Q: Hilbert symbols, construction from a
ramified prime set and element arithmetic.

An algebra (a, b) has basis 1, i, j, k with i^2 = a, j^2 = b, ij = -ji = k.
Elements are handled internally as 4-tuples of Fractions; QuatElement wraps
them for callers who want operator syntax.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Tuple, Union

from sympy import factorint, isprime
from sympy.functions.combinatorial.numbers import legendre_symbol

from utils.config import ALGEBRA_SEARCH_BOUND
from utils.errors import SearchExhaustedError

logger = logging.getLogger(__name__)

INFINITY = "inf"

Coords = Tuple[Fraction, Fraction, Fraction, Fraction]
Place = Union[int, str]


def _square_class_integer(x) -> int:
    """Integer in the same square class as the nonzero rational x"""
    x = Fraction(x)
    if x == 0:
        raise ValueError("hilbert symbol arguments must be nonzero")
    return x.numerator * x.denominator


def _split_valuation(x: int, p: int) -> Tuple[int, int]:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def hilbert_symbol(a, b, p: Place) -> int:
    """Hilbert symbol (a, b)_p for nonzero rationals a, b.

    Args:
        a, b: nonzero rationals
        p: a prime or INFINITY

    Returns:
        +1 if z^2 = a x^2 + b y^2 has a nontrivial solution over Q_p, else -1
    """
    a = _square_class_integer(a)
    b = _square_class_integer(b)
    if p == INFINITY:
        return -1 if (a < 0 and b < 0) else 1
    alpha, u = _split_valuation(a, p)
    beta, v = _split_valuation(b, p)
    if p == 2:
        def eps(x):
            return ((x - 1) // 2) % 2

        def omega(x):
            return ((x * x - 1) // 8) % 2

        exponent = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if exponent % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= int(legendre_symbol(u % p, p))
    if alpha % 2:
        sign *= int(legendre_symbol(v % p, p))
    return sign


def _relevant_places(a: int, b: int, extra: Iterable[int] = ()) -> Tuple[int, ...]:
    primes = set(factorint(abs(2 * a * b)).keys()) | set(extra)
    return tuple(sorted(primes))


@dataclass(frozen=True)
class QuaternionAlgebra:
    a: int
    b: int
    ramified: Tuple[int, ...] = field(default=None)

    def __post_init__(self):
        if self.a >= 0 or self.b >= 0:
            raise ValueError(f"({self.a}, {self.b}) is not a definite algebra")
        if self.ramified is None:
            object.__setattr__(self, "ramified", ramified_primes(self.a, self.b))

    # ------------------------------------------------------------------
    # coordinate arithmetic
    # ------------------------------------------------------------------

    def multiply(self, x: Coords, y: Coords) -> Coords:
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    @staticmethod
    def conjugate(x: Coords) -> Coords:
        return (x[0], -x[1], -x[2], -x[3])

    def reduced_norm(self, x: Coords) -> Fraction:
        a, b = self.a, self.b
        return x[0] * x[0] - a * x[1] * x[1] - b * x[2] * x[2] + a * b * x[3] * x[3]

    @staticmethod
    def reduced_trace(x: Coords) -> Fraction:
        return 2 * x[0]

    def bilinear(self, x: Coords, y: Coords) -> Fraction:
        """Polar form of the reduced norm: nrd(x + y) = nrd(x) + 2 B(x, y) + nrd(y)"""
        a, b = self.a, self.b
        return x[0] * y[0] - a * x[1] * y[1] - b * x[2] * y[2] + a * b * x[3] * y[3]

    # ------------------------------------------------------------------
    # elements
    # ------------------------------------------------------------------

    def element(self, *coords) -> "QuatElement":
        if len(coords) == 1:
            coords = tuple(coords[0])
        if len(coords) != 4:
            raise ValueError("a quaternion has four coordinates")
        return QuatElement(self, tuple(Fraction(c) for c in coords))

    def one(self) -> "QuatElement":
        return self.element(1, 0, 0, 0)

    def basis(self) -> Tuple["QuatElement", ...]:
        return tuple(self.element(*(1 if t == s else 0 for t in range(4))) for s in range(4))

    def __str__(self) -> str:
        return f"({self.a}, {self.b}) ramified at {list(self.ramified)}"


@dataclass(frozen=True)
class QuatElement:
    algebra: QuaternionAlgebra
    coords: Coords

    def _check(self, other: "QuatElement"):
        if not isinstance(other, QuatElement):
            raise TypeError(f"cannot combine a quaternion with {type(other).__name__}")
        if other.algebra != self.algebra:
            raise ValueError("elements belong to different quaternion algebras")

    def __add__(self, other):
        self._check(other)
        return QuatElement(self.algebra, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return QuatElement(self.algebra, tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self):
        return QuatElement(self.algebra, tuple(-x for x in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuatElement(self.algebra, tuple(x * other for x in self.coords))
        self._check(other)
        return QuatElement(self.algebra, self.algebra.multiply(self.coords, other.coords))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuatElement(self.algebra, tuple(other * x for x in self.coords))
        return NotImplemented

    def conj(self) -> "QuatElement":
        return QuatElement(self.algebra, QuaternionAlgebra.conjugate(self.coords))

    def norm(self) -> Fraction:
        return self.algebra.reduced_norm(self.coords)

    def trace(self) -> Fraction:
        return QuaternionAlgebra.reduced_trace(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)


def mul(x: QuatElement, y: QuatElement) -> QuatElement:
    return x * y


def conj(x: QuatElement) -> QuatElement:
    return x.conj()


def norm(x: QuatElement) -> Fraction:
    return x.norm()


def trace(x: QuatElement) -> Fraction:
    return x.trace()


def ramified_primes(a: int, b: int) -> Tuple[int, ...]:
    """Finite primes where (a, b) is a division algebra"""
    return tuple(p for p in _relevant_places(a, b) if hilbert_symbol(a, b, p) == -1)


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


def construct_algebra(S: Iterable[int], bound: int = ALGEBRA_SEARCH_BOUND) -> QuaternionAlgebra:
    """Definite algebra ramified exactly at the finite primes in S.

    Pairs (a, b) of negative square-free integers are tried by increasing
    |a| + |b|, then increasing |a|; the first certified pair wins, so the
    same S always yields the same algebra.
    """
    target = tuple(sorted(set(S)))
    if not target or len(target) % 2 == 0:
        raise ValueError(f"ramified set {list(target)} must be nonempty of odd size")
    for p in target:
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
    for total in range(2, bound + 1):
        for A in range(1, total // 2 + 1):
            B = total - A
            if not (is_squarefree(A) and is_squarefree(B)):
                continue
            a, b = -A, -B
            places = _relevant_places(a, b, target)
            found = tuple(p for p in places if hilbert_symbol(a, b, p) == -1)
            if found == target:
                logger.info(f"quaternion algebra ({a}, {b}) ramified at {list(found)}")
                return QuaternionAlgebra(a, b, found)
    raise SearchExhaustedError(f"no (a, b) with |a|+|b| <= {bound} is ramified exactly at {list(target)}")


def product_formula_holds(B: QuaternionAlgebra) -> bool:
    """prod_v (a, b)_v = 1 over the relevant finite places and infinity"""
    value = hilbert_symbol(B.a, B.b, INFINITY)
    for p in _relevant_places(B.a, B.b):
        value *= hilbert_symbol(B.a, B.b, p)
    return value == 1
