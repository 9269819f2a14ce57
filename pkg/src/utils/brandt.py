"""
Brandt matrices and the weight-2 side.

b_ij(m) = (1/e_j) #{alpha in I_j^-1 I_i : nrd(alpha) N(I_j) / N(I_i) = m}.
Writing y = N(I_j) alpha, the count is taken on the lattice conj(I_j) I_i with
the integral form nrd(y) / (N(I_i) N(I_j)). That form is symmetric in i and j
(conjugation swaps the two lattices), so one enumeration per unordered pair
fills both b_ij and b_ji.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, Poly, Rational, symbols
from tqdm import tqdm

from utils.arith import factorize, primes_not_dividing
from utils.config import EIGEN_MAX_PRIMES, EIGEN_START_PRIMES, SHOW_PROGRESS, WORKERS
from utils.errors import CertificateError, NoRationalSplittingError
from utils.lattice import norm_counts
from utils.order import IdealClassSet, connecting_gram
from utils.qform import LevelConfig, mass

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BrandtMatrix:
    m: int
    entries: Tuple[Tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row_sums(self) -> List[Fraction]:
        return [sum(row, Fraction(0)) for row in self.entries]

    def trace(self) -> Fraction:
        return sum((self.entries[i][i] for i in range(self.n)), Fraction(0))

    def is_identity(self) -> bool:
        return all(self.entries[i][j] == int(i == j) for i in range(self.n) for j in range(self.n))

    def to_sympy(self) -> Matrix:
        return Matrix(self.n, self.n, lambda i, j: _rational(self.entries[i][j]))

    def apply(self, v: Sequence[Fraction]) -> List[Fraction]:
        """B_m v^T"""
        return [sum((x * Fraction(y) for x, y in zip(row, v)), Fraction(0)) for row in self.entries]

    def __matmul__(self, other: "BrandtMatrix") -> Tuple[Tuple[Fraction, ...], ...]:
        n = self.n
        return tuple(
            tuple(sum((self.entries[i][k] * other.entries[k][j] for k in range(n)), Fraction(0)) for j in range(n))
            for i in range(n)
        )

    def is_weighted_symmetric(self, w: Sequence[int]) -> bool:
        """w_j b_ij = w_i b_ji"""
        n = self.n
        return all(w[j] * self.entries[i][j] == w[i] * self.entries[j][i] for i in range(n) for j in range(n))


@dataclass
class QSeries:
    """Truncated q-expansion with exact coefficients at 0..bound"""

    coefficients: List[Fraction]
    label: str = ""

    @property
    def bound(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, index: int) -> Fraction:
        return self.coefficients[index]

    def __len__(self) -> int:
        return len(self.coefficients)

    def items(self):
        return enumerate(self.coefficients)


def _rational(x: Fraction) -> Rational:
    x = Fraction(x)
    return Rational(x.numerator, x.denominator)


def _pair_counts(args) -> np.ndarray:
    gram, bound = args
    return norm_counts(gram, bound)


def _pair_grams(classes: IdealClassSet) -> List[Tuple[int, int, list]]:
    pairs = []
    for i in range(classes.n):
        for j in range(i, classes.n):
            _, gram = connecting_gram(classes.ideals[j], classes.ideals[i])
            pairs.append((i, j, gram))
    return pairs


def brandt_series(classes: IdealClassSet, m_max: int, workers: int = WORKERS) -> List[BrandtMatrix]:
    """B_0, ..., B_{m_max} from one enumeration per unordered class pair"""
    n = classes.n
    e = classes.unit_counts
    pairs = _pair_grams(classes)
    jobs = [(gram, m_max) for _, _, gram in pairs]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            counts = list(executor.map(_pair_counts, jobs))
    else:
        counts = [_pair_counts(job) for job in tqdm(jobs, desc="Brandt pairs", disable=not SHOW_PROGRESS)]

    table = [[[Fraction(0)] * n for _ in range(n)] for _ in range(m_max + 1)]
    for (i, j, _), c in zip(pairs, counts):
        for m in range(m_max + 1):
            k = int(c[m])
            table[m][i][j] = Fraction(k, e[j])
            table[m][j][i] = Fraction(k, e[i])
    logger.info(f"Brandt matrices B_0..B_{m_max} for {n} classes ({len(pairs)} pairs)")
    return [BrandtMatrix(m, tuple(tuple(row) for row in table[m])) for m in range(m_max + 1)]


def brandt_matrix(classes: IdealClassSet, m: int) -> BrandtMatrix:
    return brandt_series(classes, m, workers=1)[m]


def expected_row_sum(m: int, cfg: LevelConfig) -> int:
    """b_m, multiplicative in m.

    Local factor at l^k: 1 for l ramified, sigma(l^k) + l * sigma(l^(k-1)) for
    l | M, sigma(l^k) otherwise. Equal to the divisor sum over d | m prime to
    P whenever gcd(m, M) = 1.
    """
    if m < 1:
        raise ValueError(f"expected m >= 1, got {m}")
    total = 1
    for l, k in factorize(m).factors:
        if l in cfg.ramified:
            continue
        sigma_k = (l ** (k + 1) - 1) // (l - 1)
        if l in cfg.split:
            sigma_k += l * (l ** k - 1) // (l - 1)
        total *= sigma_k
    return total


def theta_weight2(matrices: Sequence[BrandtMatrix], i: int, j: int) -> QSeries:
    """theta_ij = sum_m b_ij(m) q^m (indices are 0-based)"""
    return QSeries([B[i, j] for B in matrices], label=f"theta_{i + 1}{j + 1}")


def eisenstein_e2(cfg: LevelConfig, m_max: int) -> QSeries:
    coefficients = [mass(cfg)] + [Fraction(expected_row_sum(m, cfg)) for m in range(1, m_max + 1)]
    return QSeries(coefficients, label="e2")


# ============================================================================
# Rational eigenspaces
# ============================================================================

@dataclass
class Eigenspace:
    """Simultaneous eigenspace; basis columns in class coordinates"""

    basis: Matrix
    eigenvalues: Dict[int, Rational] = field(default_factory=dict)
    irreducible: bool = False  # some Hecke polynomial factor of degree > 1

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass
class EigenSystem:
    u: Tuple[int, ...]
    u_eigenvalues: Dict[int, int]
    v: Optional[Tuple[int, ...]]
    y: Optional[Tuple[int, ...]]  # v_i / w_i, primitive
    w: Tuple[int, ...]
    eigenvalues: Dict[int, int]
    rational_spaces: List[Eigenspace]
    unsplit: List[int]
    primes: List[int]


def _restrict(W: Matrix, B: Matrix) -> Matrix:
    """Matrix of B on the B-stable column space of W"""
    return (W.T * W).inv() * W.T * B * W


def _split(space: Eigenspace, B: Matrix, p: int) -> List[Eigenspace]:
    x = symbols("x")
    C = _restrict(space.basis, B)
    poly = Poly(C.charpoly(x).as_expr(), x, domain="QQ")
    _, factors = poly.factor_list()
    pieces = []
    for f, _ in sorted(factors, key=lambda fe: (fe[0].degree(), [str(c) for c in fe[0].all_coeffs()])):
        coeffs = f.all_coeffs()
        K = Matrix.zeros(*C.shape)
        for c in coeffs:
            K = K * C + c * Matrix.eye(C.shape[0])
        null = K.nullspace()
        if not null:
            continue
        sub = space.basis * Matrix.hstack(*null)
        values = dict(space.eigenvalues)
        irreducible = space.irreducible
        if f.degree() == 1:
            values[p] = -coeffs[1] / coeffs[0]
        else:
            irreducible = True
        pieces.append(Eigenspace(sub, values, irreducible))
    return pieces


def _primitive(values: Sequence[Rational]) -> Tuple[int, ...]:
    den = 1
    for v in values:
        den = den * int(Rational(v).q) // gcd(den, int(Rational(v).q))
    ints = [int(Rational(v) * den) for v in values]
    g = 0
    for k in ints:
        g = gcd(g, k)
    ints = [k // g for k in ints]
    lead = next((k for k in ints if k), 1)
    if lead < 0:
        ints = [-k for k in ints]
    return tuple(ints)


def _is_u(space: Eigenspace) -> bool:
    col = list(space.basis[:, 0])
    return space.dim == 1 and all(c == col[0] for c in col)


def rational_eigensystem(
    classes: IdealClassSet,
    matrices: Optional[Sequence[BrandtMatrix]] = None,
    primes: Optional[Sequence[int]] = None,
    select: Optional[Sequence[int]] = None,
) -> EigenSystem:
    """Split the Brandt module over Q by B_p for good primes p.

    `select` lists leading eigenvalues a_p (in the order of the good primes)
    identifying the wanted one-dimensional space; without it the space with the
    smallest eigenvalue tuple is chosen.
    """
    cfg = classes.cfg
    n = classes.n
    if primes is None:
        primes = primes_not_dividing(cfg.N, count=EIGEN_MAX_PRIMES)
    primes = list(primes)
    if any(cfg.N % p == 0 for p in primes):
        raise ValueError(f"primes {primes} must not divide N={cfg.N}")
    if matrices is None or len(matrices) <= max(primes):
        matrices = brandt_series(classes, max(primes))

    spaces = [Eigenspace(Matrix.eye(n))]
    used = []
    for count, p in enumerate(primes, start=1):
        B = matrices[p].to_sympy()
        refined = []
        for space in spaces:
            if space.dim == 1 or space.irreducible:
                C = _restrict(space.basis, B)
                if space.dim == 1:
                    space.eigenvalues[p] = C[0, 0]
                refined.append(space)
            else:
                refined.extend(_split(space, B, p))
        spaces = refined
        used.append(p)
        done = all(s.dim == 1 or s.irreducible for s in spaces)
        if done and count >= EIGEN_START_PRIMES:
            break

    ones = tuple([1] * n)
    u_space = next((s for s in spaces if _is_u(s)), None)
    if u_space is None:
        raise NoRationalSplittingError([s.dim for s in spaces])
    u_eigenvalues = {p: int(u_space.eigenvalues[p]) for p in used}

    rational = [s for s in spaces if s.dim == 1 and s is not u_space]
    rational.sort(key=lambda s: tuple(s.eigenvalues[p] for p in used))
    unsplit = [s.dim for s in spaces if s.dim > 1]
    w = classes.w

    chosen = None
    if select is not None:
        k = len(select)
        chosen = next((s for s in rational if [s.eigenvalues[p] for p in used[:k]] == list(select)), None)
    elif rational:
        chosen = rational[0]
    if chosen is None:
        raise NoRationalSplittingError(unsplit)

    col = list(chosen.basis[:, 0])
    y = _primitive([col[i] / w[i] for i in range(n)])
    v = tuple(y[i] * w[i] for i in range(n))
    eigenvalues = {p: int(chosen.eigenvalues[p]) for p in used}
    logger.info(f"{cfg}: eigenvector v={v}, a_p={eigenvalues}, unsplit dims {unsplit}")
    return EigenSystem(
        u=ones,
        u_eigenvalues=u_eigenvalues,
        v=v,
        y=y,
        w=tuple(w),
        eigenvalues=eigenvalues,
        rational_spaces=rational,
        unsplit=unsplit,
        primes=used,
    )


def hecke_eigenvalues(eig: EigenSystem, matrices: Sequence[BrandtMatrix], primes: Sequence[int]) -> Dict[int, int]:
    """a_p for the selected eigenvector, each certified by B_p v = a_p v"""
    out = {}
    v = eig.v
    for p in primes:
        image = matrices[p].apply(v)
        k = next(i for i, x in enumerate(v) if x)
        a_p = image[k] / v[k]
        if any(image[i] != a_p * v[i] for i in range(len(v))):
            raise CertificateError(f"B_{p} v is not a multiple of v={v}")
        if a_p.denominator != 1:
            raise CertificateError(f"eigenvalue {a_p} at p={p} is not an integer")
        out[p] = int(a_p)
    return out
