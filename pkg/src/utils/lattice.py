"""
Exact lattice primitives.

Lattices are given by generator rows with rational (Fraction) entries. The
canonical basis is the row Hermite normal form over a common denominator,
so two generator sets span the same lattice exactly when their bases agree.

Short vectors are enumerated from an integral quadratic form (values of
x^T G x are integers, i.e. 2G is an integer matrix) by the Fincke-Pohst
recursion on an exact rational Cholesky decomposition: every coordinate range
is an exact integer interval, so no candidate is dropped or invented.
"""

import logging
import math
from fractions import Fraction
from itertools import product
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from utils.errors import LatticeError

logger = logging.getLogger(__name__)

Matrix = List[List[Fraction]]


# ============================================================================
# Integer Hermite normal form
# ============================================================================

def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, x, y) with x*a + y*b = g = gcd(a, b) >= 0"""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hnf_integer(rows: Sequence[Sequence[int]], ncols: int) -> List[List[int]]:
    """Row Hermite normal form of an integer matrix of full column rank.

    Output is upper triangular with positive pivots and entries above each
    pivot reduced into [0, pivot).
    """
    pending = [list(r) for r in rows if any(r)]
    H = []
    for col in range(ncols):
        pivot = None
        rest = []
        for r in pending:
            if r[col] == 0:
                rest.append(r)
                continue
            if pivot is None:
                pivot = r
                continue
            g, x, y = _xgcd(pivot[col], r[col])
            s, t = pivot[col] // g, r[col] // g
            new_pivot = [x * u + y * v for u, v in zip(pivot, r)]
            other = [t * u - s * v for u, v in zip(pivot, r)]
            pivot = new_pivot
            if any(other):
                rest.append(other)
        if pivot is None:
            raise LatticeError(f"generators do not span a lattice of rank {ncols}")
        if pivot[col] < 0:
            pivot = [-u for u in pivot]
        H.append(pivot)
        pending = rest
    for i in range(ncols):
        for k in range(i):
            q = H[k][i] // H[i][i]
            if q:
                H[k] = [u - q * v for u, v in zip(H[k], H[i])]
    return H


def common_denominator(rows: Sequence[Sequence[Fraction]]) -> int:
    den = 1
    for r in rows:
        for x in r:
            d = Fraction(x).denominator
            den = den * d // math.gcd(den, d)
    return den


def hnf_basis(generators: Sequence[Sequence[Fraction]], ncols: int = 4) -> Tuple[Tuple[Fraction, ...], ...]:
    """Canonical basis of the lattice spanned by rational generator rows."""
    den = common_denominator(generators)
    scaled = [[int(Fraction(x) * den) for x in g] for g in generators]
    H = hnf_integer(scaled, ncols)
    return tuple(tuple(Fraction(x, den) for x in row) for row in H)


# ============================================================================
# Exact rational linear algebra (small dense matrices)
# ============================================================================

def inverse(m: Sequence[Sequence[Fraction]]) -> Matrix:
    """Gauss-Jordan inverse over the rationals"""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise LatticeError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def determinant(m: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def transpose(m: Sequence[Sequence[Fraction]]) -> Matrix:
    return [list(col) for col in zip(*m)]


def row_times(v: Sequence[Fraction], m: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    """Row vector v times matrix m"""
    return [sum((v[k] * m[k][j] for k in range(len(v))), Fraction(0)) for j in range(len(m[0]))]


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    return [row_times(row, b) for row in a]


def dual_basis(basis: Sequence[Sequence[Fraction]]) -> Tuple[Tuple[Fraction, ...], ...]:
    """Basis of {y : y . x in Z for every x in the lattice} (standard dot product)"""
    return hnf_basis(transpose(inverse(basis)), len(basis))


def intersection(basis_a, basis_b) -> Tuple[Tuple[Fraction, ...], ...]:
    """L_a meet L_b, computed as the dual of dual(L_a) + dual(L_b)"""
    sum_of_duals = hnf_basis(list(dual_basis(basis_a)) + list(dual_basis(basis_b)), len(basis_a))
    return dual_basis(sum_of_duals)


def is_integral_vector(v: Sequence[Fraction]) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


# ============================================================================
# Reduction
# ============================================================================

def _gram_schmidt(G: Matrix) -> Tuple[Matrix, List[Fraction]]:
    n = len(G)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = G[i][j] - sum((mu[j][k] * mu[i][k] * bstar[k] for k in range(j)), Fraction(0))
            mu[i][j] = s / bstar[j]
        bstar[i] = G[i][i] - sum((mu[i][k] * mu[i][k] * bstar[k] for k in range(i)), Fraction(0))
    return mu, bstar


def _conjugate_gram(G: Matrix, E: List[List[int]]) -> Matrix:
    """E G E^T"""
    n = len(G)
    EG = [[sum((E[i][k] * G[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
    return [[sum((EG[i][k] * E[j][k] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]


def lll_gram(gram: Sequence[Sequence[Fraction]], delta: Fraction = Fraction(3, 4)) -> Tuple[List[List[int]], Matrix]:
    """LLL reduction acting on a positive definite Gram matrix.

    Returns:
        (T, G') with T unimodular and G' = T G T^T; row i of T expresses the
        i-th reduced basis vector in the original basis.
    """
    n = len(gram)
    G = [[Fraction(x) for x in row] for row in gram]
    T = [[int(i == j) for j in range(n)] for i in range(n)]
    if n < 2:
        return T, G
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            mu, _ = _gram_schmidt(G)
            q = round(mu[k][j])
            if q:
                E = [[int(r == c) for c in range(n)] for r in range(n)]
                E[k][j] = -q
                G = _conjugate_gram(G, E)
                T[k] = [a - q * b for a, b in zip(T[k], T[j])]
        mu, bstar = _gram_schmidt(G)
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            G[k], G[k - 1] = G[k - 1], G[k]
            for row in G:
                row[k], row[k - 1] = row[k - 1], row[k]
            T[k], T[k - 1] = T[k - 1], T[k]
            k = max(k - 1, 1)
    return T, G


def cholesky(A: Sequence[Sequence[Fraction]]) -> Matrix:
    """Q with x^T A x = sum_i Q[i][i] * (x_i + sum_{j>i} Q[i][j] x_j)^2"""
    n = len(A)
    Q = [[Fraction(x) for x in row] for row in A]
    for i in range(n):
        if Q[i][i] <= 0:
            raise LatticeError("quadratic form is not positive definite")
        for j in range(i + 1, n):
            Q[j][i] = Q[i][j]
            Q[i][j] = Q[i][j] / Q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k][l] -= Q[k][i] * Q[i][l]
    return Q


# ============================================================================
# Enumeration
# ============================================================================

def _floor_plus_sqrt(u: Fraction, r: Fraction) -> int:
    """Largest integer x with x <= u + sqrt(r), for r >= 0"""
    x = math.floor(u) + math.isqrt(math.floor(r)) + 1
    while x > u and (x - u) ** 2 > r:
        x -= 1
    return x


def _interval(center: Fraction, radius_sq: Fraction) -> Tuple[int, int]:
    """Integers x with (x - center)^2 <= radius_sq"""
    if radius_sq < 0:
        return 1, 0
    hi = _floor_plus_sqrt(center, radius_sq)
    lo = -_floor_plus_sqrt(-center, radius_sq)
    return lo, hi


def integral_form(gram: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    """2G as an integer matrix; rejects forms that are not integer valued"""
    A = []
    for i, row in enumerate(gram):
        out = []
        for j, x in enumerate(row):
            y = 2 * Fraction(x)
            if y.denominator != 1 or (i == j and y.numerator % 2):
                raise LatticeError("quadratic form is not integer valued on the lattice")
            out.append(y.numerator)
        A.append(out)
    return A


class ShortVectorEnumerator:
    """Lattice points x with Q(x) = x^T G x <= bound for an integer-valued form.

    The basis is LLL reduced once; points are reported in the ORIGINAL
    coordinates when requested.
    """

    def __init__(self, gram: Sequence[Sequence[Fraction]]):
        self.n = len(gram)
        self.T, reduced = lll_gram(gram)
        self.A = integral_form(reduced)
        self.Q = cholesky(self.A)

    def _walk(self, bound2: int, leaf):
        n, Q, A = self.n, self.Q, self.A
        x = [0] * n

        def rec(i, remaining):
            center = -sum((Q[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
            lo, hi = _interval(center, remaining / Q[i][i])
            if lo > hi:
                return
            if i == 0:
                lin = sum(A[0][j] * x[j] for j in range(1, n))
                rest = sum(x[j] * A[j][k] * x[k] for j in range(1, n) for k in range(1, n))
                leaf(lo, hi, A[0][0], lin, rest, x)
                return
            for xi in range(lo, hi + 1):
                x[i] = xi
                t = xi - center
                rec(i - 1, remaining - Q[i][i] * t * t)
            x[i] = 0

        rec(n - 1, Fraction(bound2))

    def counts(self, bound: int) -> np.ndarray:
        """counts[m] = #{x : Q(x) = m} for 0 <= m <= bound"""
        chunks = []

        def leaf(lo, hi, a00, lin, rest, _x):
            xs = np.arange(lo, hi + 1, dtype=np.int64)
            chunks.append(a00 * xs * xs + 2 * lin * xs + rest)

        self._walk(2 * bound, leaf)
        if not chunks:
            return np.zeros(bound + 1, dtype=np.int64)
        values = np.concatenate(chunks)
        if np.any(values % 2):
            raise LatticeError("odd value of 2Q encountered")
        return np.bincount(values // 2, minlength=bound + 1)[: bound + 1].astype(np.int64)

    def vectors(self, bound: int) -> Iterator[Tuple[Tuple[int, ...], int]]:
        """Yield (coordinates in the original basis, Q(x)) for Q(x) <= bound"""
        found = []

        def leaf(lo, hi, a00, lin, rest, x):
            for x0 in range(lo, hi + 1):
                y = [x0] + x[1:]
                value = a00 * x0 * x0 + 2 * lin * x0 + rest
                found.append((tuple(y), value // 2))

        self._walk(2 * bound, leaf)
        T, n = self.T, self.n
        for y, value in found:
            coords = tuple(sum(y[i] * T[i][j] for i in range(n)) for j in range(n))
            yield coords, value


def norm_counts(gram: Sequence[Sequence[Fraction]], bound: int) -> np.ndarray:
    return ShortVectorEnumerator(gram).counts(bound)


def has_vector_of_value(gram: Sequence[Sequence[Fraction]], value: int) -> bool:
    return bool(ShortVectorEnumerator(gram).counts(value)[value] > 0)


def residue_vectors(p: int, dim: int = 4) -> Iterator[Tuple[int, ...]]:
    """Nonzero vectors of (Z/p)^dim in lexicographic order"""
    for c in product(range(p), repeat=dim):
        if any(c):
            yield c


def rref_mod_p(rows: Sequence[Sequence[int]], p: int) -> Tuple[Tuple[int, ...], ...]:
    """Reduced row echelon form over F_p (nonzero rows only)"""
    m = [[x % p for x in r] for r in rows]
    ncols = len(m[0]) if m else 0
    out = []
    for col in range(ncols):
        piv = next((r for r in m if r[col]), None)
        if piv is None:
            continue
        m.remove(piv)
        inv = pow(piv[col], -1, p)
        piv = [x * inv % p for x in piv]
        m = [[(x - r[col] * y) % p for x, y in zip(r, piv)] for r in m]
        out = [[(x - r[col] * y) % p for x, y in zip(r, piv)] for r in out]
        out.append(piv)
    out.sort(key=lambda r: next(i for i, x in enumerate(r) if x))
    return tuple(tuple(r) for r in out)


def span_mod_p(basis: Sequence[Sequence[int]], p: int) -> List[Tuple[int, ...]]:
    """All vectors of the F_p-span of the given rows"""
    dim = len(basis[0])
    out = []
    for coeffs in product(range(p), repeat=len(basis)):
        out.append(tuple(sum(c * b[t] for c, b in zip(coeffs, basis)) % p for t in range(dim)))
    return out


def integer_kernel(t: Sequence[int]) -> List[List[int]]:
    """Basis of {x in Z^n : x . t = 0}, by unimodular column operations"""
    n = len(t)
    t = list(t)
    U = [[int(i == j) for j in range(n)] for i in range(n)]  # rows are the transformed unit vectors
    while sum(1 for x in t if x) > 1:
        k = min((i for i in range(n) if t[i]), key=lambda i: abs(t[i]))
        for i in range(n):
            if i != k and t[i]:
                q = t[i] // t[k]
                t[i] -= q * t[k]
                U[i] = [a - q * b for a, b in zip(U[i], U[k])]
    return [U[i] for i in range(n) if t[i] == 0]
