"""
Binary quadratic forms, class numbers of imaginary quadratic orders and the
class-number side of the Cohen-Eisenstein coefficients.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, List

from utils.arith import (
    FactoredInt,
    discriminant,
    discriminant_decompositions,
    eichler_symbol,
    factorize,
    from_primes,
    is_discriminant,
    is_fundamental_discriminant,
    kronecker,
)
from utils.errors import ConfigError


@dataclass(frozen=True, order=True)
class ReducedForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        if not (abs(self.b) <= self.a <= self.c):
            return False
        if self.b < 0 and (abs(self.b) == self.a or self.a == self.c):
            return False
        return True


def reduce_form(a: int, b: int, c: int) -> ReducedForm:
    """Reduce a positive definite form (a, b, c) to the unique reduced
    representative of its proper equivalence class."""
    if a <= 0 or b * b - 4 * a * c >= 0:
        raise ValueError(f"({a}, {b}, {c}) is not positive definite")
    while True:
        # normalize: -a < b <= a
        if not (-a < b <= a):
            r = (a - b) // (2 * a)
            b, c = b + 2 * r * a, a * r * r + b * r + c
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            continue
        return ReducedForm(a, b, c)


@lru_cache(maxsize=8192)
def reduced_forms(d: int) -> tuple:
    """Primitive reduced forms of discriminant d, in lexicographic order."""
    if not is_discriminant(d):
        raise ValueError(f"{d} is not a negative discriminant")
    forms = []
    for a in range(1, isqrt(-d // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            forms.append(ReducedForm(a, b, c))
    return tuple(forms)


def class_number(d: int) -> int:
    """Class number of the imaginary quadratic order of discriminant d."""
    return len(reduced_forms(d))


def unit_factor(d: int) -> int:
    """Half the number of units of the order of discriminant d."""
    discriminant(d)
    if d == -3:
        return 3
    if d == -4:
        return 2
    return 1


@dataclass(frozen=True)
class LevelConfig:
    """Square-free level N = P * M: P is the odd-size ramified set, M the
    Eichler part."""

    P: FactoredInt
    M: FactoredInt

    @classmethod
    def from_primes(cls, ramified: Iterable[int], M: int = 1) -> "LevelConfig":
        ramified = list(ramified)
        if len(set(ramified)) != len(ramified):
            raise ConfigError(f"repeated prime in ramified set {ramified}")
        try:
            P = from_primes(ramified)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        if M < 1:
            raise ConfigError(f"M must be a positive integer, got {M}")
        Mf = factorize(M)
        if not Mf.is_squarefree:
            raise ConfigError(f"M = {M} is not square-free")
        if P.omega % 2 == 0:
            raise ConfigError(f"ramified set {list(P.primes)} must have odd cardinality")
        if gcd(P.value, M) != 1:
            raise ConfigError(f"M = {M} shares a prime with the ramified set")
        return cls(P, Mf)

    @property
    def N(self) -> int:
        return self.P.value * self.M.value

    @property
    def ramified(self) -> tuple:
        return self.P.primes

    @property
    def split(self) -> tuple:
        return self.M.primes

    @property
    def level_primes(self) -> tuple:
        return tuple(sorted(self.ramified + self.split))

    @property
    def omega(self) -> int:
        return self.P.omega + self.M.omega

    @property
    def key(self) -> str:
        ram = "-".join(str(p) for p in self.ramified)
        return f"P{ram}_M{self.M.value}"

    def __str__(self) -> str:
        return f"N={self.N} (ramified {list(self.ramified)}, M={self.M.value})"


def mass(cfg: LevelConfig) -> Fraction:
    """(1/24) * prod (p - 1) over p | P * prod (q + 1) over q | M"""
    value = Fraction(1, 24)
    for p in cfg.ramified:
        value *= p - 1
    for q in cfg.split:
        value *= q + 1
    return value


def _local_factor(d: int, cfg: LevelConfig) -> int:
    D = -d
    factor = 1
    for p in cfg.ramified:
        factor *= 1 - eichler_symbol(D, p)
    for q in cfg.split:
        factor *= 1 + eichler_symbol(D, q)
    return factor


def embedding_number(d: int, cfg: LevelConfig) -> int:
    """Total number of optimal embeddings of the order of discriminant d,
    summed over the ideal classes: h(d) times the local factors."""
    return class_number(d) * _local_factor(d, cfg)


@lru_cache(maxsize=None)
def closed_form_H(D: int, cfg: LevelConfig) -> Fraction:
    """H(D) = 1/2 * sum over -D = d f^2 of h(d)/u(d) * local factors."""
    if D <= 0:
        raise ValueError(f"closed_form_H expects D > 0, got {D}")
    total = Fraction(0)
    for disc, _ in discriminant_decompositions(D):
        d = disc.d
        total += Fraction(class_number(d), unit_factor(d)) * _local_factor(d, cfg)
    return total / 2


def ramified_count(D: int, cfg: LevelConfig) -> int:
    """s(D): primes dividing N that ramify in Q(sqrt(-D))"""
    return sum(1 for p in cfg.level_primes if kronecker(-D, p) == 0)


def satisfies_kronecker_condition(D: int, cfg: LevelConfig) -> bool:
    if any(kronecker(-D, p) == 1 for p in cfg.ramified):
        return False
    if any(kronecker(-D, q) == -1 for q in cfg.split):
        return False
    return True


def is_admissible(D: int, cfg: LevelConfig) -> bool:
    """-D fundamental and the Kronecker condition holds"""
    return is_fundamental_discriminant(-D) and satisfies_kronecker_condition(D, cfg)


def corollary_H(D: int, cfg: LevelConfig) -> Fraction:
    """2^(omega(N) - 1 - s(D)) * h(-D) / u(-D) for admissible D."""
    if not is_fundamental_discriminant(-D):
        raise ValueError(f"-{D} is not a fundamental discriminant")
    if not satisfies_kronecker_condition(D, cfg):
        raise ValueError(f"D = {D} violates the Kronecker condition at {cfg}")
    exponent = cfg.omega - 1 - ramified_count(D, cfg)
    return Fraction(2) ** exponent * Fraction(class_number(-D), unit_factor(-D))


def gross_H(D: int, N: int) -> Fraction:
    """Prime level, M = 1: (1 - (-D/N)) / 2 * h(-D) / u(-D)."""
    if not is_fundamental_discriminant(-D):
        raise ValueError(f"-{D} is not a fundamental discriminant")
    return Fraction(1 - kronecker(-D, N), 2) * Fraction(class_number(-D), unit_factor(-D))


def discriminants_upto(d_max: int) -> List[int]:
    """Positive D <= d_max with -D a discriminant"""
    return [D for D in range(3, d_max + 1) if D % 4 in (0, 3)]
