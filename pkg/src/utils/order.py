"""
Orders and left ideals in a definite quaternion algebra.

Maximal orders are obtained by saturating the standard order Z<1, i, j, k>
prime by prime; Eichler orders of square-free level by intersecting with the
right order of a left ideal of prime norm. Left ideal classes are found by a
breadth-first walk over p-neighbours that stops exactly when the accumulated
mass sum(1/e_i) equals the mass formula.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import factorint

from utils.arith import primes_not_dividing, rational_gcd
from utils.config import CLASS_INVARIANT_BOUND, SPLITTING_RETRIES
from utils.errors import (
    LatticeError,
    MassOvershootError,
    SaturationError,
    SplittingNotFoundError,
)
from utils.graph_store import NeighbourGraph
from utils.lattice import (
    determinant,
    dual_basis,
    hnf_basis,
    hnf_integer,
    integral_form,
    intersection,
    inverse,
    norm_counts,
    has_vector_of_value,
    rref_mod_p,
    residue_vectors,
    row_times,
    span_mod_p,
    transpose,
)
from utils.qform import LevelConfig, mass
from utils.quatalg import QuatElement, QuaternionAlgebra, construct_algebra

logger = logging.getLogger(__name__)

Basis = Tuple[Tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class OrderLattice:
    """Rank-4 lattice in the algebra; rows of `basis` are coordinates over (1, i, j, k).

    Used for orders, right orders and the underlying lattices of ideals.
    """

    algebra: QuaternionAlgebra
    basis: Basis

    @cached_property
    def gram(self) -> List[List[Fraction]]:
        """Gram matrix of the reduced norm: nrd(x) = c G c^T for x = c * basis"""
        B = self.algebra
        return [[B.bilinear(x, y) for y in self.basis] for x in self.basis]

    @cached_property
    def inverse(self) -> List[List[Fraction]]:
        return inverse(self.basis)

    def coordinates(self, x: Sequence[Fraction]) -> List[Fraction]:
        return row_times(list(x), self.inverse)

    def contains(self, x: Sequence[Fraction]) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(x))

    def element(self, coords: Sequence[int]) -> Tuple[Fraction, ...]:
        return tuple(row_times(list(coords), self.basis))

    def elements(self) -> Tuple[QuatElement, ...]:
        return tuple(self.algebra.element(b) for b in self.basis)

    def scaled_gram(self, scale: Fraction) -> List[List[Fraction]]:
        return [[x / scale for x in row] for row in self.gram]

    def is_integral(self) -> bool:
        """Every element has integral reduced trace and reduced norm"""
        if any((2 * b[0]).denominator != 1 for b in self.basis):
            return False
        for s, row in enumerate(self.gram):
            for t, x in enumerate(row):
                if s == t and x.denominator != 1:
                    return False
                if (2 * x).denominator != 1:
                    return False
        return True

    def is_order(self) -> bool:
        one = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
        if not self.contains(one) or not self.is_integral():
            return False
        mult = self.algebra.multiply
        return all(self.contains(mult(x, y)) for x in self.basis for y in self.basis)


@dataclass(frozen=True)
class LeftIdeal:
    """Left ideal of `order` with reduced norm `norm`"""

    order: OrderLattice
    basis: Basis
    norm: Fraction

    @cached_property
    def lattice(self) -> OrderLattice:
        return OrderLattice(self.order.algebra, self.basis)

    @property
    def gram(self) -> List[List[Fraction]]:
        return self.lattice.gram

    @cached_property
    def right_order(self) -> OrderLattice:
        return right_order(self.order.algebra, self.basis)

    def scale(self, x: Sequence[Fraction]) -> "LeftIdeal":
        """The ideal I * x"""
        mult = self.order.algebra.multiply
        basis = hnf_basis([mult(b, tuple(x)) for b in self.basis])
        return LeftIdeal(self.order, basis, self.norm * self.order.algebra.reduced_norm(tuple(x)))


@dataclass(eq=False)
class IdealClassSet:
    """Representatives I_1 = O, ..., I_n of the left ideal classes of O"""

    cfg: LevelConfig
    order: OrderLattice
    ideals: List[LeftIdeal]
    right_orders: List[OrderLattice]
    unit_counts: List[int]
    neighbour_prime: int
    invariants: List[Tuple[int, ...]] = field(default_factory=list)
    graph: Optional[NeighbourGraph] = None

    @property
    def algebra(self) -> QuaternionAlgebra:
        return self.order.algebra

    @property
    def n(self) -> int:
        return len(self.ideals)

    @property
    def w(self) -> List[int]:
        return [e // 2 for e in self.unit_counts]

    def mass_sum(self) -> Fraction:
        return sum((Fraction(1, e) for e in self.unit_counts), Fraction(0))

    def __len__(self) -> int:
        return self.n


# ============================================================================
# Lattice products and integrality
# ============================================================================

def lattice_product(B: QuaternionAlgebra, left: Basis, right: Basis, conjugate_left: bool = False) -> Basis:
    """Z-span of the products x * y (or conj(x) * y)"""
    gens = []
    for x in left:
        if conjugate_left:
            x = B.conjugate(x)
        for y in right:
            gens.append(B.multiply(x, y))
    return hnf_basis(gens)


def standard_order(B: QuaternionAlgebra) -> OrderLattice:
    one = [[Fraction(int(s == t)) for t in range(4)] for s in range(4)]
    return OrderLattice(B, hnf_basis(one))


def reduced_discriminant(O: OrderLattice) -> int:
    """sqrt(det of the reduced trace form); the trace form is 2 * gram"""
    det = 16 * determinant(O.gram)
    if det.denominator != 1 or det <= 0:
        raise LatticeError(f"trace form determinant {det} is not a positive integer")
    d = isqrt(det.numerator)
    if d * d != det.numerator:
        raise LatticeError(f"trace form determinant {det} is not a square")
    return d


def ring_closure(B: QuaternionAlgebra, generators: Sequence[Sequence[Fraction]]) -> Optional[OrderLattice]:
    """Smallest ring containing the generators, or None once a non-integral
    element appears."""
    L = OrderLattice(B, hnf_basis(generators))
    while True:
        if not L.is_integral():
            return None
        grown = hnf_basis(list(L.basis) + list(lattice_product(B, L.basis, L.basis)))
        if grown == L.basis:
            return L
        L = OrderLattice(B, grown)


def _enlarge_at(O: OrderLattice, p: int) -> Optional[OrderLattice]:
    """An order O' containing O with p-power index, or None if O is p-maximal"""
    B = O.algebra
    for c in residue_vectors(p):
        x = tuple(Fraction(v) / p for v in O.element(c))
        if (2 * x[0]).denominator != 1 or B.reduced_norm(x).denominator != 1:
            continue
        bigger = ring_closure(B, list(O.basis) + [x])
        if bigger is not None:
            logger.debug(f"enlarged at p={p} by {c}/p")
            return bigger
    return None


def maximal_order(B: QuaternionAlgebra) -> OrderLattice:
    """Maximal order of reduced discriminant prod(ramified primes)"""
    target = 1
    for p in B.ramified:
        target *= p
    O = standard_order(B)
    disc = reduced_discriminant(O)
    while disc != target:
        if disc % target:
            raise SaturationError(0, disc)
        p = min(factorint(disc // target))
        bigger = _enlarge_at(O, p)
        if bigger is None:
            raise SaturationError(p, disc)
        O = bigger
        disc = reduced_discriminant(O)
        logger.debug(f"reduced discriminant now {disc}")
    logger.info(f"maximal order of {B}: reduced discriminant {disc}")
    return O


# ============================================================================
# Ideals
# ============================================================================

def _multiplier_columns(B: QuaternionAlgebra, basis: Basis, on_left: bool) -> List[List[Fraction]]:
    inv = inverse(basis)
    columns = []
    for g in basis:
        if on_left:
            rows = [B.multiply(g, e) for e in _unit_vectors()]
        else:
            rows = [B.multiply(e, g) for e in _unit_vectors()]
        C = [row_times(list(r), inv) for r in rows]
        columns.extend(transpose(C))
    return columns


def _unit_vectors() -> List[Tuple[Fraction, ...]]:
    return [tuple(Fraction(int(s == t)) for t in range(4)) for s in range(4)]


def right_order(B: QuaternionAlgebra, basis: Basis) -> OrderLattice:
    """{x : I x in I}, the dual of the span of the columns of the maps x -> g x"""
    span = hnf_basis(_multiplier_columns(B, basis, on_left=True))
    return OrderLattice(B, dual_basis(span))


def left_order(B: QuaternionAlgebra, basis: Basis) -> OrderLattice:
    """{x : x I in I}"""
    span = hnf_basis(_multiplier_columns(B, basis, on_left=False))
    return OrderLattice(B, dual_basis(span))


def ideal_norm(B: QuaternionAlgebra, basis: Basis) -> Fraction:
    """Reduced norm of a lattice: gcd of the reduced norms of its elements"""
    G = OrderLattice(B, basis).gram
    values = []
    for s in range(4):
        values.append(G[s][s])
        for t in range(s + 1, 4):
            values.append(2 * G[s][t])
    return rational_gcd(values)


def principal_ideal(O: OrderLattice) -> LeftIdeal:
    return LeftIdeal(O, O.basis, Fraction(1))


def unit_count(R: OrderLattice) -> int:
    """Number of units, i.e. elements of reduced norm 1"""
    return int(norm_counts(R.gram, 1)[1])


def connecting_gram(I: LeftIdeal, J: LeftIdeal) -> Tuple[Basis, List[List[Fraction]]]:
    """Lattice conj(I) * J with the form nrd / (N(I) N(J))"""
    B = I.order.algebra
    basis = lattice_product(B, I.basis, J.basis, conjugate_left=True)
    L = OrderLattice(B, basis)
    return basis, L.scaled_gram(I.norm * J.norm)


def is_equivalent(I: LeftIdeal, J: LeftIdeal) -> bool:
    """J = I x for some x in the algebra"""
    _, gram = connecting_gram(I, J)
    return has_vector_of_value(gram, 1)


def class_invariant(I: LeftIdeal) -> Tuple[int, ...]:
    """Counts of small norms in the right order; equal for equivalent ideals"""
    return tuple(int(c) for c in norm_counts(I.right_order.gram, CLASS_INVARIANT_BOUND))


def eichler_order(Omax: OrderLattice, M: int) -> OrderLattice:
    """Suborder of level M in Omax (M square-free, prime to the ramified set)"""
    O = Omax
    B = Omax.algebra
    for q in sorted(factorint(M)):
        disc = reduced_discriminant(O)
        A = integral_form(O.gram)
        tries = 0
        found = None
        for c in residue_vectors(q):
            if _form_value(A, c) % (2 * q):
                continue
            eps = O.element(c)
            gens = [B.multiply(b, eps) for b in O.basis] + [tuple(q * x for x in b) for b in O.basis]
            J = hnf_basis(gens)
            candidate = OrderLattice(B, intersection(O.basis, right_order(B, J).basis))
            if reduced_discriminant(candidate) == disc * q and candidate.is_order():
                found = candidate
                break
            tries += 1
            logger.debug(f"zero divisor {c} mod {q} rejected")
            if tries >= SPLITTING_RETRIES:
                break
        if found is None:
            raise SplittingNotFoundError(q)
        O = found
        logger.info(f"Eichler order: level {disc * q}")
    return O


def _form_value(A: Sequence[Sequence[int]], c: Sequence[int]) -> int:
    return sum(c[s] * A[s][t] * c[t] for s in range(4) for t in range(4))


def p_neighbours(I: LeftIdeal, p: int) -> List[LeftIdeal]:
    """The p + 1 left ideals J in I with [I : J] = p^2 and N(J) = p N(I).

    Each is O x + p I for x in I with nrd(x) = 0 mod p N(I), x not in p I.
    Candidates are visited in lexicographic order of their coordinates mod p,
    so the output order is deterministic.
    """
    O = I.order
    B = O.algebra
    A = integral_form(I.lattice.scaled_gram(I.norm))
    inv = I.lattice.inverse
    left_mult = []
    for o in O.basis:
        rows = [row_times(list(B.multiply(o, b)), inv) for b in I.basis]
        if any(x.denominator != 1 for r in rows for x in r):
            raise LatticeError("lattice is not a left ideal of its order")
        left_mult.append([[int(x) for x in r] for r in rows])

    covered = set()
    neighbours = []
    for c in residue_vectors(p):
        if c in covered:
            continue
        if _form_value(A, c) % (2 * p):
            continue
        images = [[sum(c[s] * L[s][u] for s in range(4)) for u in range(4)] for L in left_mult]
        key = rref_mod_p(images, p)
        if len(key) != 2:
            logger.debug(f"isotropic {c} spans rank {len(key)} mod {p}")
            continue
        covered.update(span_mod_p(key, p))
        gens = images + [[p * int(s == t) for t in range(4)] for s in range(4)]
        H = hnf_integer(gens, 4)
        basis = hnf_basis([row_times([Fraction(h) for h in row], I.basis) for row in H])
        neighbours.append(LeftIdeal(O, basis, I.norm * p))
        if len(neighbours) == p + 1:
            break
    return neighbours


# ============================================================================
# Class enumeration
# ============================================================================

def level_config(O: OrderLattice) -> LevelConfig:
    P = 1
    for p in O.algebra.ramified:
        P *= p
    return LevelConfig.from_primes(O.algebra.ramified, reduced_discriminant(O) // P)


def neighbour_prime(cfg: LevelConfig) -> int:
    return primes_not_dividing(cfg.N, count=1)[0]


class _ClassIndex:
    """Known classes keyed by right-order invariant"""

    def __init__(self):
        self.ideals: List[LeftIdeal] = []
        self.invariants: List[Tuple[int, ...]] = []
        self.by_invariant: Dict[Tuple[int, ...], List[int]] = {}

    def add(self, ideal: LeftIdeal, invariant: Tuple[int, ...]) -> int:
        index = len(self.ideals)
        self.ideals.append(ideal)
        self.invariants.append(invariant)
        self.by_invariant.setdefault(invariant, []).append(index)
        return index

    def find(self, ideal: LeftIdeal) -> Tuple[Optional[int], Tuple[int, ...]]:
        invariant = class_invariant(ideal)
        for k in self.by_invariant.get(invariant, []):
            if is_equivalent(self.ideals[k], ideal):
                return k, invariant
        return None, invariant


def left_ideal_classes(O: OrderLattice, cfg: Optional[LevelConfig] = None) -> IdealClassSet:
    """Breadth-first search over p-neighbours, certified by the mass formula"""
    cfg = cfg or level_config(O)
    target = mass(cfg)
    p = neighbour_prime(cfg)
    graph = NeighbourGraph(prime=p)

    index = _ClassIndex()
    first = principal_ideal(O)
    invariant = class_invariant(first)
    index.add(first, invariant)
    unit_counts = [invariant[1]]
    graph.add_class(0, {"norm": str(first.norm), "unit_count": invariant[1]})
    total = Fraction(1, invariant[1])

    queue = deque([0])
    while total < target:
        if not queue:
            raise MassOvershootError(f"neighbour search exhausted at mass {total} < {target}")
        i = queue.popleft()
        for J in p_neighbours(index.ideals[i], p):
            k, invariant = index.find(J)
            if k is None:
                k = index.add(J, invariant)
                e = invariant[1]
                unit_counts.append(e)
                graph.add_class(k, {"norm": str(J.norm), "unit_count": e})
                total += Fraction(1, e)
                logger.debug(f"class {k + 1}: e={e}, mass so far {total}")
                if total > target:
                    raise MassOvershootError(f"mass {total} exceeds {target} after {k + 1} classes")
                queue.append(k)
            graph.add_neighbour(i, k)
            if total == target:
                break
    logger.info(f"{cfg}: {len(index.ideals)} classes, mass {total}")
    return IdealClassSet(
        cfg=cfg,
        order=O,
        ideals=index.ideals,
        right_orders=[I.right_order for I in index.ideals],
        unit_counts=unit_counts,
        neighbour_prime=p,
        invariants=index.invariants,
        graph=graph,
    )


def classify(classes: IdealClassSet, J: LeftIdeal) -> int:
    """Index of the class of J"""
    invariant = class_invariant(J)
    for k, known in enumerate(classes.invariants or [class_invariant(I) for I in classes.ideals]):
        if known == invariant and is_equivalent(classes.ideals[k], J):
            return k
    raise MassOvershootError(f"ideal of norm {J.norm} matches none of the {classes.n} classes")


def neighbour_graph(classes: IdealClassSet, p: Optional[int] = None) -> NeighbourGraph:
    """Full p-neighbour multigraph on the classes"""
    p = p or classes.neighbour_prime
    if classes.cfg.N % p == 0:
        raise ValueError(f"p={p} divides the level {classes.cfg.N}")
    if not classes.invariants:
        classes.invariants = [class_invariant(I) for I in classes.ideals]
    graph = NeighbourGraph(prime=p)
    for k, I in enumerate(classes.ideals):
        graph.add_class(k, {"norm": str(I.norm), "unit_count": classes.unit_counts[k]})
    for i, I in enumerate(classes.ideals):
        for J in p_neighbours(I, p):
            graph.add_neighbour(i, classify(classes, J))
    return graph


def build_class_set(cfg: LevelConfig) -> IdealClassSet:
    """Algebra, maximal order, Eichler order and its ideal classes for a level"""
    B = construct_algebra(cfg.ramified)
    O = maximal_order(B)
    if cfg.M.value > 1:
        O = eichler_order(O, cfg.M.value)
    classes = left_ideal_classes(O, cfg)
    classes.graph = neighbour_graph(classes)
    return classes
